#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treecut/dp_solver.hpp"
#include "treecut/graph.hpp"
#include "treecut/reconstruct.hpp"

namespace treecut::oracle {

/// Exhaustive search refuses inputs above this size.
struct EnumerationBudget {
  std::size_t max_vertices = 10;
  int max_parts = 10;
};

/// label[v] = part index (0-based) or -1 for residue.
using Labeling = std::vector<int>;

/// Calls visit(label, parts) for every connected subpartition of the tree with
/// at least one part. Throws BudgetExceeded.
void enumerate_connected_subpartitions(const RootedTree& tree, const EnumerationBudget& budget,
                                       const std::function<void(const Labeling&, int)>& visit);

/// Every connected kappa-subpartition with at most lambda residue vertices,
/// once each. Parts are ordered by their smallest vertex index, members by
/// index; expansions are filled in. Throws BudgetExceeded.
std::vector<Subpartition> connected_subpartitions(const RootedTree& tree, int kappa, int lambda,
                                                  bool include_potentials = false,
                                                  const EnumerationBudget& budget = {});

/// Max expansion over the parts of a labeling, from first principles.
Rational max_part_expansion(const RootedTree& tree, const Labeling& label, int parts,
                            bool include_potentials);

/// best[k][r]: minimum max-expansion over subpartitions with exactly k parts
/// and exactly r residue vertices that avoid the forbidden ids.
struct Summary {
  std::vector<std::vector<std::optional<Rational>>> best;

  /// min over r <= lambda of best[kappa][r].
  std::optional<Rational> min_xi(int kappa, int lambda) const;
  bool decide(const Rational& xi, int kappa, int lambda) const;
  /// Largest k with a Yes answer, 0 if none.
  int k_max(const Rational& xi, int lambda) const;
};

Summary summarize(const RootedTree& tree, bool use_potentials,
                  const std::vector<std::string>& forbidden = {},
                  const EnumerationBudget& budget = {});

bool oracle_decide(const RootedTree& tree, const ProblemSpec& spec,
                   const EnumerationBudget& budget = {});
std::optional<Rational> oracle_min_xi(const RootedTree& tree, int kappa, int lambda,
                                      bool use_potentials = false,
                                      const std::vector<std::string>& forbidden = {},
                                      const EnumerationBudget& budget = {});

/// Sorted distinct expansions of every connected vertex set: the only values
/// at which a decision answer can change.
std::vector<Rational> ratio_set(const RootedTree& tree, bool use_potentials,
                                const EnumerationBudget& budget = {});

/// Brute force on the graph itself: every assignment of vertices to kappa
/// connected parts or the residue, with forced and forbidden outliers.
std::optional<Rational> graph_min_xi(const WeightedGraph& graph,
                                     const std::vector<std::string>& must_be_outlier,
                                     const std::vector<std::string>& never_outlier, int kappa,
                                     int lambda, bool use_potentials,
                                     const EnumerationBudget& budget = {});

}  // namespace treecut::oracle
