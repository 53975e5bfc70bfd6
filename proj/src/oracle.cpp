#include "treecut/oracle.hpp"

#include <algorithm>
#include <unordered_set>

#include "treecut/error.hpp"

namespace treecut::oracle {

namespace {

void check_budget(std::size_t n, const EnumerationBudget& budget) {
  if (n > budget.max_vertices) {
    throw Error(ErrorCode::kBudgetExceeded, std::to_string(n) + " vertices exceeds oracle budget of " +
                                                std::to_string(budget.max_vertices));
  }
}

// Parents before children, by depth.
std::vector<Vertex> top_down(const RootedTree& tree) {
  const std::size_t n = tree.size();
  std::vector<int> depth(n, -1);
  depth[tree.root()] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex v = 0; v < n; ++v) {
      if (depth[v] < 0 && depth[tree.parent(v)] >= 0) {
        depth[v] = depth[tree.parent(v)] + 1;
        changed = true;
      }
    }
  }
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return depth[a] < depth[b]; });
  return order;
}

std::vector<bool> forbidden_mask(const RootedTree& tree, const std::vector<std::string>& ids) {
  std::vector<bool> mask(tree.size(), false);
  for (const auto& id : ids) {
    auto v = tree.find(id);
    if (!v) throw Error(ErrorCode::kUnknownVertexId, "forbidden outlier '" + id + "'");
    mask[*v] = true;
  }
  return mask;
}

}  // namespace

void enumerate_connected_subpartitions(const RootedTree& tree, const EnumerationBudget& budget,
                                       const std::function<void(const Labeling&, int)>& visit) {
  const std::size_t n = tree.size();
  check_budget(n, budget);
  const std::vector<Vertex> order = top_down(tree);
  Labeling label(n, -1);
  int parts = 0;
  // Each vertex is residue, joins its parent's part, or opens a new part.
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == n) {
      if (parts > 0) visit(label, parts);
      return;
    }
    const Vertex v = order[i];
    label[v] = -1;
    go(i + 1);
    if (v != tree.root() && label[tree.parent(v)] >= 0) {
      label[v] = label[tree.parent(v)];
      go(i + 1);
    }
    label[v] = parts++;
    go(i + 1);
    --parts;
    label[v] = -1;
  };
  go(0);
}

std::vector<Subpartition> connected_subpartitions(const RootedTree& tree, int kappa, int lambda,
                                                  bool include_potentials,
                                                  const EnumerationBudget& budget) {
  if (kappa > budget.max_parts) {
    throw Error(ErrorCode::kBudgetExceeded, "kappa " + std::to_string(kappa) +
                                                " exceeds oracle budget of " +
                                                std::to_string(budget.max_parts));
  }
  std::vector<Subpartition> out;
  enumerate_connected_subpartitions(tree, budget, [&](const Labeling& label, int parts) {
    if (parts != kappa) return;
    std::vector<int> canon(parts, -1);
    int next = 0;
    Subpartition sub;
    for (Vertex v = 0; v < tree.size(); ++v) {
      if (label[v] < 0) {
        sub.residue.push_back(tree.label(v));
        continue;
      }
      if (canon[label[v]] < 0) {
        canon[label[v]] = next++;
        sub.parts.emplace_back();
      }
      sub.parts[canon[label[v]]].push_back(tree.label(v));
    }
    if (static_cast<int>(sub.residue.size()) > lambda) return;
    Labeling relabeled(label.size(), -1);
    for (Vertex v = 0; v < tree.size(); ++v) {
      if (label[v] >= 0) relabeled[v] = canon[label[v]];
    }
    for (int p = 0; p < parts; ++p) {
      Labeling single(label.size(), -1);
      for (Vertex v = 0; v < tree.size(); ++v) {
        if (relabeled[v] == p) single[v] = 0;
      }
      sub.expansions.push_back(max_part_expansion(tree, single, 1, include_potentials));
      sub.max_expansion = std::max(sub.max_expansion, sub.expansions.back());
    }
    out.push_back(std::move(sub));
  });
  return out;
}

Rational max_part_expansion(const RootedTree& tree, const Labeling& label, int parts,
                            bool include_potentials) {
  std::vector<Rational> boundary(parts, Rational(0));
  std::vector<Rational> weight(parts, Rational(0));
  for (Vertex v = 0; v < tree.size(); ++v) {
    const int p = label[v];
    if (p >= 0) {
      weight[p] += tree.weight(v);
      if (include_potentials) boundary[p] += tree.potential(v);
    }
    if (v == tree.root()) continue;
    const int q = label[tree.parent(v)];
    if (p == q) continue;
    if (p >= 0) boundary[p] += tree.parent_edge_cost(v);
    if (q >= 0) boundary[q] += tree.parent_edge_cost(v);
  }
  Rational worst = 0;
  for (int p = 0; p < parts; ++p) worst = std::max(worst, Rational(boundary[p] / weight[p]));
  return worst;
}

std::optional<Rational> Summary::min_xi(int kappa, int lambda) const {
  if (kappa < 0 || static_cast<std::size_t>(kappa) >= best.size()) return std::nullopt;
  std::optional<Rational> out;
  const auto& row = best[kappa];
  for (int r = 0; r <= lambda && static_cast<std::size_t>(r) < row.size(); ++r) {
    if (row[r] && (!out || *row[r] < *out)) out = row[r];
  }
  return out;
}

bool Summary::decide(const Rational& xi, int kappa, int lambda) const {
  auto m = min_xi(kappa, lambda);
  return m && *m <= xi;
}

int Summary::k_max(const Rational& xi, int lambda) const {
  for (int k = static_cast<int>(best.size()) - 1; k >= 1; --k) {
    if (decide(xi, k, lambda)) return k;
  }
  return 0;
}

Summary summarize(const RootedTree& tree, bool use_potentials,
                  const std::vector<std::string>& forbidden, const EnumerationBudget& budget) {
  const std::size_t n = tree.size();
  const std::vector<bool> banned = forbidden_mask(tree, forbidden);
  Summary s;
  s.best.assign(n + 1, std::vector<std::optional<Rational>>(n + 1));
  enumerate_connected_subpartitions(tree, budget, [&](const Labeling& label, int parts) {
    int residue = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (label[v] < 0) {
        if (banned[v]) return;
        ++residue;
      }
    }
    Rational x = max_part_expansion(tree, label, parts, use_potentials);
    auto& cell = s.best[parts][residue];
    if (!cell || x < *cell) cell = x;
  });
  return s;
}

bool oracle_decide(const RootedTree& tree, const ProblemSpec& spec,
                   const EnumerationBudget& budget) {
  return summarize(tree, spec.use_potentials, spec.forbidden_outliers, budget)
      .decide(spec.xi, spec.kappa, spec.lambda);
}

std::optional<Rational> oracle_min_xi(const RootedTree& tree, int kappa, int lambda,
                                      bool use_potentials,
                                      const std::vector<std::string>& forbidden,
                                      const EnumerationBudget& budget) {
  return summarize(tree, use_potentials, forbidden, budget).min_xi(kappa, lambda);
}

std::vector<Rational> ratio_set(const RootedTree& tree, bool use_potentials,
                                const EnumerationBudget& budget) {
  std::vector<Rational> out;
  // A single part with everything else in the residue covers every connected set.
  enumerate_connected_subpartitions(tree, budget, [&](const Labeling& label, int parts) {
    if (parts == 1) out.push_back(max_part_expansion(tree, label, 1, use_potentials));
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Rational> graph_min_xi(const WeightedGraph& graph,
                                     const std::vector<std::string>& must_be_outlier,
                                     const std::vector<std::string>& never_outlier, int kappa,
                                     int lambda, bool use_potentials,
                                     const EnumerationBudget& budget) {
  const std::size_t n = graph.size();
  check_budget(n, budget);
  std::vector<int> forced(n, 0);  // 1 must be outlier, -1 never
  for (const auto& id : must_be_outlier) {
    auto v = graph.find(id);
    if (!v) throw Error(ErrorCode::kUnknownVertexId, "'" + id + "'");
    forced[*v] = 1;
  }
  for (const auto& id : never_outlier) {
    auto v = graph.find(id);
    if (!v) throw Error(ErrorCode::kUnknownVertexId, "'" + id + "'");
    if (forced[*v] == 1) return std::nullopt;
    forced[*v] = -1;
  }
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    auto [a, b] = graph.endpoints(e);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  std::optional<Rational> best;
  std::vector<int> label(n, -1);
  auto evaluate = [&](int parts) {
    std::vector<Rational> boundary(parts, Rational(0));
    std::vector<Rational> weight(parts, Rational(0));
    std::vector<int> size(parts, 0);
    std::vector<std::size_t> first(parts, n);
    for (std::size_t v = 0; v < n; ++v) {
      const int p = label[v];
      if (p < 0) continue;
      weight[p] += graph.vertices()[v].weight;
      if (use_potentials) boundary[p] += graph.vertices()[v].potential;
      ++size[p];
      if (first[p] == n) first[p] = v;
    }
    for (std::size_t e = 0; e < graph.edges().size(); ++e) {
      auto [a, b] = graph.endpoints(e);
      if (label[a] == label[b]) continue;
      if (label[a] >= 0) boundary[label[a]] += graph.edges()[e].cost;
      if (label[b] >= 0) boundary[label[b]] += graph.edges()[e].cost;
    }
    Rational worst = 0;
    for (int p = 0; p < parts; ++p) {
      // connectivity
      std::vector<bool> seen(n, false);
      std::vector<std::size_t> stack{first[p]};
      seen[first[p]] = true;
      int reached = 0;
      while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        ++reached;
        for (std::size_t w : adj[v]) {
          if (!seen[w] && label[w] == p) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
      if (reached != size[p]) return;
      worst = std::max(worst, Rational(boundary[p] / weight[p]));
    }
    if (!best || worst < *best) best = worst;
  };

  std::function<void(std::size_t, int, int)> go = [&](std::size_t v, int parts, int residue) {
    if (parts > kappa || residue > lambda) return;
    if (v == n) {
      if (parts == kappa) evaluate(parts);
      return;
    }
    if (forced[v] != -1) {
      label[v] = -1;
      go(v + 1, parts, residue + 1);
    }
    if (forced[v] != 1) {
      for (int p = 0; p <= parts; ++p) {
        label[v] = p;
        go(v + 1, std::max(parts, p + 1), residue);
      }
    }
    label[v] = -1;
  };
  go(0, 0, 0);
  return best;
}

}  // namespace treecut::oracle
