#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "treecut/rooted_tree.hpp"
#include "treecut/scaled_value.hpp"

namespace treecut {

/// One decision query: is there a connected kappa-subpartition whose parts all
/// have expansion <= xi, with at most lambda residue vertices, none of them in
/// forbidden_outliers?
struct ProblemSpec {
  Rational xi = 0;
  int kappa = 1;
  int lambda = 0;
  bool use_potentials = false;
  std::vector<std::string> forbidden_outliers;  // vertex ids
};

/// How a residue root combines its children's feasibility rows.
enum class ResidueRule {
  /// Children's residue counts sum to at most l - 1; the root itself is the
  /// one extra outlier.
  kSingleCharge,
  /// Literal per-step form that subtracts one from the budget at every child
  /// after the first. Wrong for one child and for three or more; kept only to
  /// regression-test the difference.
  kPerStepCharge,
};

enum class Arithmetic {
  kAuto,     // int64 cells with SIMD kernels when magnitudes fit, else exact bignum
  kBigInt,   // always exact bignum cells
};

struct SolveOptions {
  bool retain_tables = true;
  ResidueRule residue_rule = ResidueRule::kSingleCharge;
  Arithmetic arithmetic = Arithmetic::kAuto;
};

/// Why mu(u,k,l) holds.
enum class Choice : std::uint8_t {
  kInfeasible = 0,
  kGammaWitness,  // u lies in a part; the Gamma branch certified it
  kResidueRoot,   // u is an outlier; children combine
  kLeafPart,
  kLeafResidue,
};

/// Per-vertex Gamma / mu grids plus the backtrack records reconstruction needs.
///
/// Grids are stored per vertex for k <= min(kappa, |T_u|) and
/// l <= min(lambda, |T_u|); reads outside that window are answered from the
/// window (larger l repeats the last column, larger k is infeasible).
class DpTables {
 public:
  int kappa() const { return kappa_; }
  int lambda() const { return lambda_; }
  std::size_t vertex_count() const { return kcap_.size(); }
  /// The tree the sweep ran on.
  const RootedTree* tree() const { return tree_; }
  bool fast_arithmetic() const { return std::holds_alternative<FastGamma>(gamma_); }

  /// True if this vertex's rows are still held (always for the root).
  bool has_rows(Vertex u) const { return !mu_[u].empty(); }
  bool has_choices() const { return has_choices_; }

  bool mu(Vertex u, int k, int l) const;
  /// For k >= 1.
  ScaledValue gamma(Vertex u, int k, int l) const;
  Choice choice(Vertex u, int k, int l) const;

  int kcap(Vertex u) const { return kcap_[u]; }
  int lcap(Vertex u) const { return lcap_[u]; }

  // Backtrack records. Splits are packed as (k << 32) | l.
  struct Split {
    int k;
    int l;
  };
  /// Split chosen for Y(i, k, l) at vertex u, child step i (1-based).
  Split gamma_split(Vertex u, std::size_t step, int k, int l) const;
  /// Whether child step i's edge was cut in X(i, k, l).
  bool edge_cut(Vertex u, std::size_t step, int k, int l) const;
  /// Split chosen for U(i, k, l) at a residue root u.
  Split residue_split(Vertex u, std::size_t step, int k, int l) const;

 private:
  friend class DpSweep;
  using FastGamma = std::vector<std::vector<std::int64_t>>;
  using ExactGamma = std::vector<std::vector<ScaledValue>>;

  std::size_t cell(Vertex u, int k, int l) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(lcap_[u] + 1) +
           static_cast<std::size_t>(l);
  }

  const RootedTree* tree_ = nullptr;
  int kappa_ = 0;
  int lambda_ = 0;
  bool has_choices_ = false;
  std::vector<int> kcap_;
  std::vector<int> lcap_;
  std::variant<FastGamma, ExactGamma> gamma_;
  std::vector<std::vector<std::uint8_t>> mu_;
  std::vector<std::vector<std::uint8_t>> choice_;
  std::vector<std::vector<std::int64_t>> y_split_;
  std::vector<std::vector<std::uint8_t>> x_cut_;
  std::vector<std::vector<std::size_t>> x_offset_;
  std::vector<std::vector<std::int64_t>> u_split_;
  std::vector<int> u_kcap_;
};

struct Decision {
  bool feasible = false;
  DpTables tables;
};

/// epsilon_xi(e_v) = xi * w(T_v) + c(e_v) [- p(T_v) with potentials], in the
/// instance's multiplier units. Throws RootHasNoParentEdge for the root.
ScaledValue epsilon(const ScaledInstance& inst, Vertex v, bool use_potentials);

/// Runs the bottom-up sweep over the whole tree and answers mu(r, kappa, lambda).
Decision decide_cmsc(const RootedTree& tree, const ProblemSpec& spec,
                     const SolveOptions& options = {});

}  // namespace treecut
