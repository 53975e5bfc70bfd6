#include "treecut/dp_solver.hpp"

#include <algorithm>
#include <unordered_set>

#include "treecut/error.hpp"
#include "treecut/kernels.hpp"

namespace treecut {

namespace {

inline std::int64_t pack_split(int k, int l) {
  return (static_cast<std::int64_t>(k) << 32) | static_cast<std::int64_t>(static_cast<std::uint32_t>(l));
}

inline DpTables::Split unpack_split(std::int64_t tag) {
  return {static_cast<int>(tag >> 32), static_cast<int>(static_cast<std::uint32_t>(tag & 0xffffffff))};
}

// int64 cells, SIMD kernels.
struct FastCells {
  using Value = std::int64_t;

  const simd::KernelTable* kernels = &simd::active_kernels();

  static Value infinity() { return simd::kInf; }
  static bool is_infinite(Value v) { return v >= simd::kInfFloor; }
  static Value from(const BigInt& v) { return static_cast<Value>(v); }
  static ScaledValue to_scaled(Value v) {
    return is_infinite(v) ? ScaledValue::infinity() : ScaledValue(static_cast<long long>(v));
  }

  void min_plus(Value* out, const Value* in, std::size_t n, const Value& s) const {
    kernels->min_plus(out, in, n, s);
  }
  void min_plus_arg(Value* out, std::int64_t* arg, const Value* in, std::size_t n, const Value& s,
                    std::int64_t tag) const {
    kernels->min_plus_arg(out, arg, in, n, s, tag);
  }
  void le_mask(std::uint8_t* out, const Value* in, std::size_t n, const Value& t) const {
    kernels->le_mask(out, in, n, t);
  }
  void saturate(Value* v, std::size_t n) const { kernels->saturate(v, n); }
};

// Exact bignum cells, scalar loops.
struct ExactCells {
  using Value = ScaledValue;

  static Value infinity() { return ScaledValue::infinity(); }
  static bool is_infinite(const Value& v) { return v.is_infinite(); }
  static Value from(const BigInt& v) { return ScaledValue(v); }
  static ScaledValue to_scaled(const Value& v) { return v; }

  void min_plus(Value* out, const Value* in, std::size_t n, const Value& s) const {
    for (std::size_t j = 0; j < n; ++j) {
      Value c = s + in[j];
      if (c < out[j]) out[j] = std::move(c);
    }
  }
  void min_plus_arg(Value* out, std::int64_t* arg, const Value* in, std::size_t n, const Value& s,
                    std::int64_t tag) const {
    for (std::size_t j = 0; j < n; ++j) {
      Value c = s + in[j];
      if (c < out[j]) {
        out[j] = std::move(c);
        arg[j] = tag;
      }
    }
  }
  void le_mask(std::uint8_t* out, const Value* in, std::size_t n, const Value& t) const {
    for (std::size_t j = 0; j < n; ++j) out[j] = in[j] <= t ? 1 : 0;
  }
  void saturate(Value*, std::size_t) const {}
};

}  // namespace

class DpSweep {
 public:
  DpSweep(const RootedTree& tree, const ProblemSpec& spec, const SolveOptions& options)
      : tree_(tree), spec_(spec), options_(options), inst_(tree, spec.xi) {
    if (spec.kappa < 1) throw Error(ErrorCode::kInvalidProblem, "kappa must be >= 1");
    if (spec.lambda < 0) throw Error(ErrorCode::kInvalidProblem, "lambda must be >= 0");
    const int n = static_cast<int>(tree.size());
    // Parts and outliers are bounded by n; larger requests only widen the
    // grids without changing any entry that can be read back.
    kappa_ = std::min(spec.kappa, n);
    lambda_ = std::min(spec.lambda, n);
    forbidden_.assign(tree.size(), 0);
    for (const std::string& id : spec.forbidden_outliers) {
      auto v = tree.find(id);
      if (!v) throw Error(ErrorCode::kUnknownVertexId, "forbidden outlier '" + id + "'");
      forbidden_[*v] = 1;
    }
    retain_ = options.retain_tables;
    record_choices_ = retain_ && options.residue_rule == ResidueRule::kSingleCharge;
  }

  Decision run() {
    // Exact charges and thresholds first; they decide which cell type fits.
    const std::size_t n = tree_.size();
    std::vector<BigInt> eps(n), thr(n);
    BigInt eps_abs_sum = 0;
    BigInt thr_abs_max = 0;
    for (Vertex v = 0; v < n; ++v) {
      BigInt base = inst_.xi_subtree_weight(v) - inst_.cost(v);
      if (spec_.use_potentials) base -= inst_.subtree_potential(v);
      thr[v] = base;
      thr_abs_max = std::max(thr_abs_max, BigInt(abs(base)));
      if (v != tree_.root()) {
        BigInt e = inst_.xi_subtree_weight(v) + inst_.cost(v);
        if (spec_.use_potentials) e -= inst_.subtree_potential(v);
        eps_abs_sum += abs(e);
        eps[v] = std::move(e);
      }
    }
    const bool fits = eps_abs_sum < simd::kFiniteBound && thr_abs_max < simd::kFiniteBound;
    if (fits && options_.arithmetic == Arithmetic::kAuto) return sweep(FastCells{}, eps, thr);
    return sweep(ExactCells{}, eps, thr);
  }

 private:
  template <class Cells>
  struct Rows {
    std::vector<typename Cells::Value> gamma;
    std::vector<std::uint8_t> mu;
  };

  template <class Cells>
  Decision sweep(const Cells& cells, const std::vector<BigInt>& eps_big,
                 const std::vector<BigInt>& thr_big) {
    using Value = typename Cells::Value;
    const std::size_t n = tree_.size();

    Decision out;
    DpTables& t = out.tables;
    t.tree_ = &tree_;
    t.kappa_ = kappa_;
    t.lambda_ = lambda_;
    t.has_choices_ = record_choices_;
    t.kcap_.resize(n);
    t.lcap_.resize(n);
    t.mu_.resize(n);
    t.choice_.resize(n);
    if (record_choices_) {
      t.y_split_.resize(n);
      t.x_cut_.resize(n);
      t.x_offset_.resize(n);
      t.u_split_.resize(n);
    }
    t.u_kcap_.assign(n, -1);
    std::vector<std::vector<Value>> gamma(n);

    for (Vertex u : tree_.order()) {
      const int size = static_cast<int>(tree_.subtree_size(u));
      t.kcap_[u] = std::min(kappa_, size);
      t.lcap_[u] = std::min(lambda_, size);
      const Value threshold = Cells::from(thr_big[u]);
      if (tree_.is_leaf(u)) {
        leaf_rows(cells, t, u, threshold, gamma[u]);
        continue;
      }
      gamma_row(cells, t, u, eps_big, gamma);
      mu_row(cells, t, u, threshold, gamma);
      if (!retain_) {
        for (Vertex c : tree_.children(u)) {
          std::vector<Value>().swap(gamma[c]);
          std::vector<std::uint8_t>().swap(t.mu_[c]);
          std::vector<std::uint8_t>().swap(t.choice_[c]);
        }
      }
    }

    if constexpr (std::is_same_v<Value, std::int64_t>) {
      t.gamma_ = DpTables::FastGamma(std::move(gamma));
    } else {
      t.gamma_ = DpTables::ExactGamma(std::move(gamma));
    }
    out.feasible = spec_.kappa <= static_cast<int>(n) &&
                   t.mu(tree_.root(), spec_.kappa, spec_.lambda);
    return out;
  }

  // Leaf: the only part through u is {u}; u may instead be the outlier.
  template <class Cells>
  void leaf_rows(const Cells& cells, DpTables& t, Vertex u, const typename Cells::Value& threshold,
                 std::vector<typename Cells::Value>& gamma_u) {
    const int ku = t.kcap_[u];  // 1
    const int w = t.lcap_[u] + 1;
    gamma_u.assign(static_cast<std::size_t>((ku + 1) * w), Cells::infinity());
    auto& mu = t.mu_[u];
    auto& choice = t.choice_[u];
    mu.assign(gamma_u.size(), 0);
    choice.assign(gamma_u.size(), 0);
    for (int l = 0; l < w; ++l) gamma_u[w + l] = typename Cells::Value(0);
    cells.le_mask(mu.data() + w, gamma_u.data() + w, static_cast<std::size_t>(w), threshold);
    for (int l = 0; l < w; ++l) {
      if (mu[w + l]) choice[w + l] = static_cast<std::uint8_t>(Choice::kLeafPart);
      if (l >= 1 && !forbidden_[u]) {
        mu[l] = 1;
        choice[l] = static_cast<std::uint8_t>(Choice::kLeafResidue);
      }
    }
  }

  // Gamma(u, ., .) by folding children one at a time: X picks, per child,
  // between cutting its edge (charge epsilon, child holds k-1 feasible parts)
  // and extending the root part into it; Y min-plus-convolves the running
  // prefix with X over (k, l).
  template <class Cells>
  void gamma_row(const Cells& cells, DpTables& t, Vertex u, const std::vector<BigInt>& eps_big,
                 std::vector<std::vector<typename Cells::Value>>& gamma) {
    using Value = typename Cells::Value;
    const int ku = t.kcap_[u];
    const int lu = t.lcap_[u];
    const std::size_t w = static_cast<std::size_t>(lu + 1);
    const std::size_t cells_u = static_cast<std::size_t>(ku + 1) * w;
    const auto children = tree_.children(u);

    std::vector<Value> y(cells_u, Cells::infinity());
    std::vector<Value> y_next(cells_u);
    std::vector<Value> x;
    for (std::size_t l = 0; l < w; ++l) y[w + l] = Value(0);
    int kc = 1;
    int lc = 0;

    std::vector<std::int64_t>* splits = nullptr;
    std::vector<std::uint8_t>* cuts = nullptr;
    if (record_choices_) {
      splits = &t.y_split_[u];
      splits->assign(children.size() * cells_u, 0);
      cuts = &t.x_cut_[u];
      cuts->clear();
      t.x_offset_[u].assign(children.size() + 1, 0);
    }

    for (std::size_t step = 0; step < children.size(); ++step) {
      const Vertex c = children[step];
      const int kcc = t.kcap_[c];
      const int lcc = t.lcap_[c];
      const std::size_t wc = static_cast<std::size_t>(lcc + 1);
      const int kx = std::min(ku, kcc + 1);
      const std::vector<Value>& gc = gamma[c];
      const std::vector<std::uint8_t>& mc = t.mu_[c];
      const Value eps = Cells::from(eps_big[c]);

      x.assign(static_cast<std::size_t>(kx + 1) * wc, Cells::infinity());
      if (cuts) {
        t.x_offset_[u][step] = cuts->size();
        cuts->resize(cuts->size() + x.size(), 0);
      }
      for (int k = 1; k <= kx; ++k) {
        for (std::size_t l = 0; l < wc; ++l) {
          const std::size_t at = static_cast<std::size_t>(k) * wc + l;
          Value g = k <= kcc ? gc[at] : Cells::infinity();
          if (mc[static_cast<std::size_t>(k - 1) * wc + l] && eps <= g) {
            x[at] = eps;
            if (cuts) (*cuts)[t.x_offset_[u][step] + at] = 1;
          } else {
            x[at] = std::move(g);
          }
        }
      }

      std::fill(y_next.begin(), y_next.end(), Cells::infinity());
      std::int64_t* arg = splits ? splits->data() + step * cells_u : nullptr;
      for (int k1 = 1; k1 <= kc; ++k1) {
        for (int l1 = 0; l1 <= lc; ++l1) {
          const Value& s = y[static_cast<std::size_t>(k1) * w + static_cast<std::size_t>(l1)];
          if (Cells::is_infinite(s)) continue;
          const std::size_t len = static_cast<std::size_t>(std::min(lcc, lu - l1) + 1);
          for (int k2 = 1; k2 <= kx; ++k2) {
            const int k = k1 + k2 - 1;
            if (k > ku) break;
            const std::size_t dst = static_cast<std::size_t>(k) * w + static_cast<std::size_t>(l1);
            const std::size_t src = static_cast<std::size_t>(k2) * wc;
            if (arg) {
              cells.min_plus_arg(y_next.data() + dst, arg + dst, x.data() + src, len, s,
                                 pack_split(k1, l1));
            } else {
              cells.min_plus(y_next.data() + dst, x.data() + src, len, s);
            }
          }
        }
      }
      cells.saturate(y_next.data(), y_next.size());
      kc = std::min(ku, kc + kx - 1);
      lc = std::min(lu, lc + lcc);
      extend_columns(y_next, arg, ku, lu, lc);
      std::swap(y, y_next);
    }
    if (cuts) t.x_offset_[u][children.size()] = cuts->size();
    gamma[u] = std::move(y);
  }

  // mu(u, ., .): the Gamma branch (u in a part, tested against the threshold)
  // or, when u may be an outlier, the boolean fold U over children with
  // residue sum <= l - 1.
  template <class Cells>
  void mu_row(const Cells& cells, DpTables& t, Vertex u, const typename Cells::Value& threshold,
              const std::vector<std::vector<typename Cells::Value>>& gamma) {
    const int ku = t.kcap_[u];
    const int lu = t.lcap_[u];
    const std::size_t w = static_cast<std::size_t>(lu + 1);
    auto& mu = t.mu_[u];
    auto& choice = t.choice_[u];
    mu.assign(static_cast<std::size_t>(ku + 1) * w, 0);
    choice.assign(mu.size(), 0);
    for (int k = 1; k <= ku; ++k) {
      cells.le_mask(mu.data() + static_cast<std::size_t>(k) * w,
                    gamma[u].data() + static_cast<std::size_t>(k) * w, w, threshold);
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i]) choice[i] = static_cast<std::uint8_t>(Choice::kGammaWitness);
    }
    if (forbidden_[u]) return;
    if (options_.residue_rule == ResidueRule::kPerStepCharge) {
      per_step_residue(t, u);
    } else if (lu >= 1) {
      single_charge_residue(t, u);
    }
  }

  void single_charge_residue(DpTables& t, Vertex u) {
    const simd::KernelTable& kernels = simd::active_kernels();
    const auto children = tree_.children(u);
    const int ku = t.kcap_[u];
    const int lu = t.lcap_[u];
    const int size = static_cast<int>(tree_.subtree_size(u));
    const int kU = std::min(ku, size - 1);
    // U(i, k, l) for l in [0, lu - 1]: the first i children jointly hold k
    // feasible parts with at most l outliers.
    const int lmax = lu - 1;
    const std::size_t w = static_cast<std::size_t>(lu);
    const std::size_t cells_u = static_cast<std::size_t>(kU + 1) * w;
    std::vector<std::uint8_t> acc(cells_u, 0);
    std::vector<std::uint8_t> next(cells_u);
    std::fill(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(w), 1);
    int kc = 0;
    int lc = 0;

    std::vector<std::int64_t>* splits = nullptr;
    if (record_choices_) {
      splits = &t.u_split_[u];
      splits->assign(children.size() * cells_u, 0);
      t.u_kcap_[u] = kU;
    }

    for (std::size_t step = 0; step < children.size(); ++step) {
      const Vertex c = children[step];
      const int kcc = t.kcap_[c];
      const int lcc = t.lcap_[c];
      const std::size_t wc = static_cast<std::size_t>(lcc + 1);
      const std::vector<std::uint8_t>& mc = t.mu_[c];
      std::fill(next.begin(), next.end(), 0);
      std::int64_t* arg = splits ? splits->data() + step * cells_u : nullptr;
      for (int k1 = 0; k1 <= kc; ++k1) {
        for (int l1 = 0; l1 <= lc; ++l1) {
          if (!acc[static_cast<std::size_t>(k1) * w + static_cast<std::size_t>(l1)]) continue;
          const std::size_t len = static_cast<std::size_t>(std::min(lcc, lmax - l1) + 1);
          for (int k2 = 0; k2 <= kcc; ++k2) {
            const int k = k1 + k2;
            if (k > kU) break;
            const std::size_t dst = static_cast<std::size_t>(k) * w + static_cast<std::size_t>(l1);
            const std::uint8_t* src = mc.data() + static_cast<std::size_t>(k2) * wc;
            if (arg) {
              kernels.or_into_arg(next.data() + dst, arg + dst, src, len, pack_split(k1, l1));
            } else {
              kernels.or_into(next.data() + dst, src, len);
            }
          }
        }
      }
      kc = std::min(kU, kc + kcc);
      lc = std::min(lmax, lc + lcc);
      extend_columns(next, arg, kU, lmax, lc);
      std::swap(acc, next);
    }

    auto& mu = t.mu_[u];
    auto& choice = t.choice_[u];
    const std::size_t wu = static_cast<std::size_t>(lu + 1);
    for (int k = 0; k <= kU; ++k) {
      for (int l = 1; l <= lu; ++l) {
        const std::size_t at = static_cast<std::size_t>(k) * wu + static_cast<std::size_t>(l);
        if (!mu[at] && acc[static_cast<std::size_t>(k) * w + static_cast<std::size_t>(l - 1)]) {
          mu[at] = 1;
          choice[at] = static_cast<std::uint8_t>(Choice::kResidueRoot);
        }
      }
    }
  }

  // The literal per-step recursion: U(1,k,l) = mu(u1,k,l) and every later
  // step spends one more unit of the budget. Its result feeds mu(u,k,l)
  // directly. Only reachable through ResidueRule::kPerStepCharge.
  void per_step_residue(DpTables& t, Vertex u) {
    const auto children = tree_.children(u);
    const int ku = t.kcap_[u];
    const int lu = t.lcap_[u];
    const std::size_t w = static_cast<std::size_t>(lu + 1);
    auto child_mu = [&](Vertex c, int k, int l) -> bool {
      if (k < 0 || l < 0 || k > t.kcap_[c]) return false;
      l = std::min(l, t.lcap_[c]);
      return t.mu_[c][static_cast<std::size_t>(k) * static_cast<std::size_t>(t.lcap_[c] + 1) +
                      static_cast<std::size_t>(l)] != 0;
    };
    std::vector<std::uint8_t> acc(static_cast<std::size_t>(ku + 1) * w, 0);
    for (int k = 0; k <= ku; ++k) {
      for (int l = 0; l <= lu; ++l) acc[k * w + l] = child_mu(children[0], k, l);
    }
    for (std::size_t step = 1; step < children.size(); ++step) {
      std::vector<std::uint8_t> next(acc.size(), 0);
      for (int k = 0; k <= ku; ++k) {
        for (int l = 0; l <= lu; ++l) {
          bool found = false;
          for (int l1 = 0; l1 <= l - 1 && !found; ++l1) {
            for (int k1 = 0; k1 <= k && !found; ++k1) {
              found = acc[k1 * w + l1] && child_mu(children[step], k - k1, l - 1 - l1);
            }
          }
          next[k * w + l] = found;
        }
      }
      acc = std::move(next);
    }
    auto& mu = t.mu_[u];
    auto& choice = t.choice_[u];
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (!mu[i] && acc[i]) {
        mu[i] = 1;
        choice[i] = static_cast<std::uint8_t>(Choice::kResidueRoot);
      }
    }
  }

  // Entries past the last meaningful column repeat it.
  template <class T>
  static void extend_columns(std::vector<T>& grid, std::int64_t* arg, int kmax, int lmax,
                             int last) {
    if (last >= lmax) return;
    const std::size_t w = static_cast<std::size_t>(lmax + 1);
    for (int k = 0; k <= kmax; ++k) {
      const std::size_t row = static_cast<std::size_t>(k) * w;
      for (int l = last + 1; l <= lmax; ++l) {
        grid[row + l] = grid[row + last];
        if (arg) arg[row + l] = arg[row + last];
      }
    }
  }

  const RootedTree& tree_;
  const ProblemSpec& spec_;
  SolveOptions options_;
  ScaledInstance inst_;
  int kappa_ = 1;
  int lambda_ = 0;
  bool retain_ = true;
  bool record_choices_ = true;
  std::vector<std::uint8_t> forbidden_;
};

bool DpTables::mu(Vertex u, int k, int l) const {
  if (k < 0 || l < 0 || k > kcap_[u]) return false;
  if (mu_[u].empty()) throw Error(ErrorCode::kTableMismatch, "rows were released");
  return mu_[u][cell(u, k, std::min(l, lcap_[u]))] != 0;
}

ScaledValue DpTables::gamma(Vertex u, int k, int l) const {
  if (k < 1 || l < 0 || k > kcap_[u]) return ScaledValue::infinity();
  if (mu_[u].empty()) throw Error(ErrorCode::kTableMismatch, "rows were released");
  const std::size_t at = cell(u, k, std::min(l, lcap_[u]));
  if (const auto* fast = std::get_if<FastGamma>(&gamma_)) {
    return FastCells::to_scaled((*fast)[u][at]);
  }
  return std::get<ExactGamma>(gamma_)[u][at];
}

Choice DpTables::choice(Vertex u, int k, int l) const {
  if (k < 0 || l < 0 || k > kcap_[u]) return Choice::kInfeasible;
  if (choice_[u].empty()) throw Error(ErrorCode::kTableMismatch, "rows were released");
  return static_cast<Choice>(choice_[u][cell(u, k, std::min(l, lcap_[u]))]);
}

DpTables::Split DpTables::gamma_split(Vertex u, std::size_t step, int k, int l) const {
  const std::size_t cells_u = static_cast<std::size_t>(kcap_[u] + 1) * (lcap_[u] + 1);
  return unpack_split(y_split_[u][(step - 1) * cells_u + cell(u, k, std::min(l, lcap_[u]))]);
}

bool DpTables::edge_cut(Vertex u, std::size_t step, int k, int l) const {
  const Vertex c = tree_->children(u)[step - 1];
  const std::size_t wc = static_cast<std::size_t>(lcap_[c] + 1);
  const std::size_t at = static_cast<std::size_t>(k) * wc + static_cast<std::size_t>(std::min(l, lcap_[c]));
  const std::size_t begin = x_offset_[u][step - 1];
  if (begin + at >= x_offset_[u][step]) return false;
  return x_cut_[u][begin + at] != 0;
}

DpTables::Split DpTables::residue_split(Vertex u, std::size_t step, int k, int l) const {
  const std::size_t w = static_cast<std::size_t>(lcap_[u]);
  const std::size_t cells_u = static_cast<std::size_t>(u_kcap_[u] + 1) * w;
  const std::size_t at = static_cast<std::size_t>(k) * w + static_cast<std::size_t>(std::min(l, lcap_[u] - 1));
  return unpack_split(u_split_[u][(step - 1) * cells_u + at]);
}

ScaledValue epsilon(const ScaledInstance& inst, Vertex v, bool use_potentials) {
  if (v == inst.tree().root()) {
    throw Error(ErrorCode::kRootHasNoParentEdge, "vertex '" + inst.tree().label(v) + "'");
  }
  BigInt e = inst.xi_subtree_weight(v) + inst.cost(v);
  if (use_potentials) e -= inst.subtree_potential(v);
  return ScaledValue(std::move(e));
}

Decision decide_cmsc(const RootedTree& tree, const ProblemSpec& spec, const SolveOptions& options) {
  return DpSweep(tree, spec, options).run();
}

}  // namespace treecut
