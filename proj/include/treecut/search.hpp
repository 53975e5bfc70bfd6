#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treecut/dp_solver.hpp"
#include "treecut/graph.hpp"
#include "treecut/reconstruct.hpp"

namespace treecut {

enum class SearchMode { kExact, kTolerance };

struct SearchOptions {
  SearchMode mode = SearchMode::kExact;
  Rational tolerance = Rational(1, 1000);
  bool use_potentials = false;
  std::vector<std::string> forbidden_outliers;
  /// Worker threads for independent per-component DP runs.
  int threads = 1;
};

struct OptimizationResult {
  /// nullopt when no connected kappa-subpartition exists at any threshold.
  std::optional<Rational> xi_star;
  std::optional<Subpartition> witness;
  int probes = 0;
  SearchMode mode = SearchMode::kExact;
  Rational tolerance = 0;
};

/// Smallest xi for which the decision is Yes. Exact mode returns the true
/// minimum as a fraction; tolerance mode returns an upper end within tolerance.
OptimizationResult min_xi(const RootedTree& tree, int kappa, int lambda,
                          const SearchOptions& options = {});
OptimizationResult min_xi(const Forest& forest, int kappa, int lambda,
                          const SearchOptions& options = {});

/// Largest k with a Yes answer at (xi, lambda), 0 if none. Scans every k.
int k_max(const RootedTree& tree, const Rational& xi, int lambda,
          const SearchOptions& options = {});
int k_max(const Forest& forest, const Rational& xi, int lambda, const SearchOptions& options = {});

struct ForestDecision {
  bool feasible = false;
  std::optional<Subpartition> witness;
};

/// Combines per-tree mu rows of the roots: Z(i,k,l) = OR over k' <= k, l' <= l
/// of Z(i-1,k',l') and mu(r_i, k-k', l-l').
ForestDecision decide_forest(const Forest& forest, const ProblemSpec& spec, bool want_witness = true,
                             int threads = 1);

/// mu(root, k, lambda) for every k in [0, kappa] across the forest.
std::vector<bool> forest_feasibility(const Forest& forest, const ProblemSpec& spec, int threads = 1);

/// Outliers forced (must_be_outlier) and forbidden (never_outlier) on a graph
/// that becomes a forest once must_be_outlier is deleted. The forced vertices
/// count toward lambda.
ForestDecision decide_semisupervised(const WeightedGraph& graph,
                                     const std::vector<std::string>& must_be_outlier,
                                     const std::vector<std::string>& never_outlier,
                                     const Rational& xi, int kappa, int lambda,
                                     bool use_potentials = false, int threads = 1);

}  // namespace treecut
