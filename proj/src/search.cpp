#include "treecut/search.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "treecut/error.hpp"

namespace treecut {

namespace {

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ProblemSpec> split_spec(const Forest& forest, const ProblemSpec& spec) {
  std::vector<ProblemSpec> out(forest.trees.size(), spec);
  for (auto& s : out) s.forbidden_outliers.clear();
  for (const std::string& id : spec.forbidden_outliers) {
    bool found = false;
    for (std::size_t i = 0; i < forest.trees.size() && !found; ++i) {
      if (forest.trees[i].find(id)) {
        out[i].forbidden_outliers.push_back(id);
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::kUnknownVertexId, "forbidden outlier '" + id + "'");
  }
  return out;
}

std::size_t total_size(const Forest& forest) {
  std::size_t n = 0;
  for (const RootedTree& t : forest.trees) n += t.size();
  return n;
}

struct ForestFold {
  int kappa = 0;
  int lambda = 0;
  std::vector<std::uint8_t> z;                  // final Z
  std::vector<std::vector<std::int64_t>> split;  // per tree step
};

ForestFold fold_roots(const Forest& forest, const std::vector<Decision>& runs, int kappa, int lambda,
                      bool record) {
  ForestFold f;
  f.kappa = kappa;
  f.lambda = lambda;
  const std::size_t w = static_cast<std::size_t>(lambda + 1);
  const std::size_t cells = static_cast<std::size_t>(kappa + 1) * w;
  f.z.assign(cells, 0);
  std::fill(f.z.begin(), f.z.begin() + static_cast<std::ptrdiff_t>(w), 1);  // no trees: k = 0
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RootedTree& tree = forest.trees[i];
    const DpTables& t = runs[i].tables;
    std::vector<std::uint8_t> next(cells, 0);
    std::vector<std::int64_t> split(record ? cells : 0, 0);
    for (int k = 0; k <= kappa; ++k) {
      for (int l = 0; l <= lambda; ++l) {
        for (int k1 = 0; k1 <= k && !next[k * w + l]; ++k1) {
          for (int l1 = 0; l1 <= l; ++l1) {
            if (f.z[k1 * w + l1] && t.mu(tree.root(), k - k1, l - l1)) {
              next[k * w + l] = 1;
              if (record) split[k * w + l] = (static_cast<std::int64_t>(k1) << 32) | l1;
              break;
            }
          }
        }
      }
    }
    f.z = std::move(next);
    if (record) f.split.push_back(std::move(split));
  }
  return f;
}

std::vector<Decision> run_trees(const Forest& forest, const std::vector<ProblemSpec>& specs,
                                bool retain, int threads) {
  std::vector<Decision> runs(forest.trees.size());
  SolveOptions opts;
  opts.retain_tables = retain;
  parallel_for(forest.trees.size(), threads,
               [&](std::size_t i) { runs[i] = decide_cmsc(forest.trees[i], specs[i], opts); });
  return runs;
}

using Decider = std::function<bool(const Rational&, std::optional<Subpartition>*)>;

OptimizationResult search_xi(const Decider& decide, const BigInt& max_den, const Rational& upper,
                             const SearchOptions& options) {
  OptimizationResult r;
  r.mode = options.mode;
  r.tolerance = options.mode == SearchMode::kTolerance ? options.tolerance : Rational(0);
  auto probe = [&](const Rational& xi, bool witness) {
    ++r.probes;
    return decide(xi, witness ? &r.witness : nullptr);
  };

  if (!probe(upper, false)) return r;
  if (probe(0, true)) {
    r.xi_star = Rational(0);
    return r;
  }
  Rational lo = 0;  // infeasible
  Rational hi = upper;  // feasible

  if (options.mode == SearchMode::kTolerance) {
    if (options.tolerance <= 0) throw Error(ErrorCode::kInvalidProblem, "tolerance must be positive");
    while (hi - lo > options.tolerance) {
      Rational mid = (lo + hi) / 2;
      if (probe(mid, false)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    if (!probe(hi, true)) throw std::logic_error("decision is not monotone in xi");
    r.xi_star = hi;
    return r;
  }

  // Achievable values are fractions with denominator <= max_den, so two of
  // them differ by at least 1/max_den^2. Probe points are the simplest
  // fractions in the middle third, which keeps probe denominators small.
  const Rational gap = Rational(1) / Rational(max_den * max_den);
  while (hi - lo >= gap) {
    Rational third = (hi - lo) / 3;
    Rational mid = simplest_between(lo + third, hi - third, true, true);
    if (probe(mid, false)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  Rational best = simplest_between(lo, hi, false, true);
  if (!probe(best, true)) {
    throw std::logic_error("decision is not monotone in xi: No at recovered minimum " +
                           format_rational(best));
  }
  if (auto below = farey_predecessor(best, max_den); below && probe(*below, false)) {
    throw std::logic_error("decision is not monotone in xi: Yes below recovered minimum at " +
                           format_rational(*below));
  }
  r.xi_star = best;
  return r;
}

Rational upper_bound(const RootedTree& tree, bool use_potentials) {
  BigInt numer = tree.scaled_total_cost();
  if (use_potentials) numer += tree.scaled_total_potential();
  return Rational(numer, tree.scaled_min_weight());
}

}  // namespace

OptimizationResult min_xi(const RootedTree& tree, int kappa, int lambda,
                          const SearchOptions& options) {
  Decider decide = [&](const Rational& xi, std::optional<Subpartition>* witness) {
    ProblemSpec spec{xi, kappa, lambda, options.use_potentials, options.forbidden_outliers};
    SolveOptions so;
    so.retain_tables = witness != nullptr;
    Decision d = decide_cmsc(tree, spec, so);
    if (d.feasible && witness) *witness = reconstruct_subpartition(tree, spec, d.tables);
    return d.feasible;
  };
  return search_xi(decide, tree.scaled_total_weight(), upper_bound(tree, options.use_potentials),
                   options);
}

OptimizationResult min_xi(const Forest& forest, int kappa, int lambda,
                          const SearchOptions& options) {
  Decider decide = [&](const Rational& xi, std::optional<Subpartition>* witness) {
    ProblemSpec spec{xi, kappa, lambda, options.use_potentials, options.forbidden_outliers};
    ForestDecision d = decide_forest(forest, spec, witness != nullptr, options.threads);
    if (d.feasible && witness) *witness = d.witness;
    return d.feasible;
  };
  BigInt max_den = 1;
  Rational upper = 0;
  for (const RootedTree& t : forest.trees) {
    max_den = std::max(max_den, t.scaled_total_weight());
    upper = std::max(upper, upper_bound(t, options.use_potentials));
  }
  return search_xi(decide, max_den, upper, options);
}

int k_max(const RootedTree& tree, const Rational& xi, int lambda, const SearchOptions& options) {
  const int n = static_cast<int>(tree.size());
  ProblemSpec spec{xi, n, lambda, options.use_potentials, options.forbidden_outliers};
  SolveOptions so;
  so.retain_tables = false;
  Decision d = decide_cmsc(tree, spec, so);
  for (int k = n; k >= 1; --k) {
    if (d.tables.mu(tree.root(), k, lambda)) return k;
  }
  return 0;
}

int k_max(const Forest& forest, const Rational& xi, int lambda, const SearchOptions& options) {
  const int n = static_cast<int>(total_size(forest));
  if (n == 0) return 0;
  ProblemSpec spec{xi, n, lambda, options.use_potentials, options.forbidden_outliers};
  std::vector<bool> row = forest_feasibility(forest, spec, options.threads);
  for (int k = n; k >= 1; --k) {
    if (row[static_cast<std::size_t>(k)]) return k;
  }
  return 0;
}

std::vector<bool> forest_feasibility(const Forest& forest, const ProblemSpec& spec, int threads) {
  const int n = static_cast<int>(total_size(forest));
  const int kappa = std::min(spec.kappa, n);
  const int lambda = std::min(spec.lambda, n);
  auto runs = run_trees(forest, split_spec(forest, spec), false, threads);
  ForestFold f = fold_roots(forest, runs, kappa, lambda, false);
  std::vector<bool> row(static_cast<std::size_t>(spec.kappa) + 1, false);
  for (int k = 0; k <= kappa; ++k) row[k] = f.z[static_cast<std::size_t>(k) * (lambda + 1) + lambda];
  return row;
}

ForestDecision decide_forest(const Forest& forest, const ProblemSpec& spec, bool want_witness,
                             int threads) {
  if (spec.kappa < 1) throw Error(ErrorCode::kInvalidProblem, "kappa must be >= 1");
  if (spec.lambda < 0) throw Error(ErrorCode::kInvalidProblem, "lambda must be >= 0");
  const int n = static_cast<int>(total_size(forest));
  ForestDecision out;
  auto specs = split_spec(forest, spec);
  if (spec.kappa > n) return out;
  const int lambda = std::min(spec.lambda, n);
  auto runs = run_trees(forest, specs, want_witness, threads);
  ForestFold f = fold_roots(forest, runs, spec.kappa, lambda, want_witness);
  const std::size_t w = static_cast<std::size_t>(lambda + 1);
  out.feasible = f.z[static_cast<std::size_t>(spec.kappa) * w + lambda] != 0;
  if (!out.feasible || !want_witness) return out;

  Subpartition sub;
  int k = spec.kappa;
  int l = lambda;
  std::vector<std::pair<int, int>> share(forest.trees.size());
  for (std::size_t i = forest.trees.size(); i >= 1; --i) {
    std::int64_t tag = f.split[i - 1][static_cast<std::size_t>(k) * w + l];
    const int k1 = static_cast<int>(tag >> 32);
    const int l1 = static_cast<int>(tag & 0xffffffff);
    share[i - 1] = {k - k1, l - l1};
    k = k1;
    l = l1;
  }
  for (std::size_t i = 0; i < forest.trees.size(); ++i) {
    auto part = reconstruct_at(forest.trees[i], specs[i], runs[i].tables, share[i].first,
                               share[i].second);
    if (!part) throw std::logic_error("forest fold selected an infeasible tree share");
    for (std::size_t j = 0; j < part->parts.size(); ++j) {
      sub.parts.push_back(std::move(part->parts[j]));
      sub.expansions.push_back(part->expansions[j]);
      sub.max_expansion = std::max(sub.max_expansion, part->expansions[j]);
    }
    for (auto& id : part->residue) sub.residue.push_back(std::move(id));
  }
  out.witness = std::move(sub);
  return out;
}

ForestDecision decide_semisupervised(const WeightedGraph& graph,
                                     const std::vector<std::string>& must_be_outlier,
                                     const std::vector<std::string>& never_outlier,
                                     const Rational& xi, int kappa, int lambda,
                                     bool use_potentials, int threads) {
  std::vector<bool> removed(graph.size(), false);
  for (const std::string& id : must_be_outlier) {
    auto v = graph.find(id);
    if (!v) throw Error(ErrorCode::kUnknownVertexId, "'" + id + "'");
    removed[*v] = true;
  }
  std::unordered_set<std::string> forced(must_be_outlier.begin(), must_be_outlier.end());
  for (const std::string& id : never_outlier) {
    if (!graph.find(id)) throw Error(ErrorCode::kUnknownVertexId, "'" + id + "'");
    if (forced.count(id)) {
      throw Error(ErrorCode::kPrecollision, "'" + id + "' is both forced and forbidden as outlier");
    }
  }
  const int forced_count = static_cast<int>(forced.size());
  if (lambda < forced_count) {
    throw Error(ErrorCode::kLambdaTooSmall, "lambda " + std::to_string(lambda) + " < " +
                                                std::to_string(forced_count) + " forced outliers");
  }

  // Edges into the forced outliers become potentials of the surviving endpoint.
  std::vector<Rational> extra(graph.size(), Rational(0));
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    auto [a, b] = graph.endpoints(e);
    if (removed[a] && !removed[b]) extra[b] += graph.edges()[e].cost;
    if (removed[b] && !removed[a]) extra[a] += graph.edges()[e].cost;
  }
  Forest forest = forest_after_deletion(graph, removed, extra, use_potentials);

  ProblemSpec spec{xi, kappa, lambda - forced_count, true, never_outlier};
  ForestDecision out = decide_forest(forest, spec, true, threads);
  if (out.witness) {
    auto& residue = out.witness->residue;
    for (std::size_t v = 0; v < graph.size(); ++v) {
      if (removed[v]) residue.push_back(graph.vertices()[v].id);
    }
    std::sort(residue.begin(), residue.end(), id_less);
  }
  return out;
}

}  // namespace treecut
