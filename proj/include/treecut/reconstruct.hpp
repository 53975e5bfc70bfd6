#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treecut/dp_solver.hpp"

namespace treecut {

/// k disjoint connected parts plus the residue, identified by vertex id.
/// Parts are listed in discovery order; ids inside a part follow vertex index order.
struct Subpartition {
  std::vector<std::vector<std::string>> parts;
  std::vector<std::string> residue;
  std::vector<Rational> expansions;
  Rational max_expansion = 0;
};

/// (c(boundary) [+ p(part)]) / w(part), boundary measured in the whole tree.
/// Throws EmptyPart.
Rational expansion(const RootedTree& tree, std::span<const Vertex> part, bool include_potentials);

/// Walks the choice records from mu(root, kappa, lambda). Returns nullopt when
/// infeasible. Throws TableMismatch when the tables were not produced for this
/// tree and spec with choices retained.
std::optional<Subpartition> reconstruct_subpartition(const RootedTree& tree,
                                                     const ProblemSpec& spec,
                                                     const DpTables& tables);

/// Same walk started from mu(root, k, l) for any k <= kappa, l <= lambda.
std::optional<Subpartition> reconstruct_at(const RootedTree& tree, const ProblemSpec& spec,
                                           const DpTables& tables, int k, int l);

enum class ViolationKind {
  kPartCount,
  kEmptyPart,
  kUnknownVertex,
  kOverlap,
  kDisconnectedPart,
  kCoverage,
  kResidueTooLarge,
  kExpansionTooLarge,
  kForbiddenInResidue,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

const char* violation_name(ViolationKind kind);

/// Every condition the subpartition fails. Expansions are recomputed from the
/// tree; the ones stored in `sub` are not trusted.
std::vector<Violation> validate_subpartition(const RootedTree& tree, const ProblemSpec& spec,
                                             const Subpartition& sub);

/// Recomputes expansions and max_expansion from the tree.
void fill_expansions(const RootedTree& tree, Subpartition& sub, bool include_potentials);

}  // namespace treecut
