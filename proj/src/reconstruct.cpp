#include "treecut/reconstruct.hpp"

#include <algorithm>

#include "treecut/error.hpp"

namespace treecut {

namespace {

struct Task {
  enum Kind { kFeasible, kRootPart } kind;
  Vertex u;
  int k;
  int l;
  std::size_t part;
};

void check_tables(const RootedTree& tree, const ProblemSpec& spec, const DpTables& tables) {
  const int n = static_cast<int>(tree.size());
  if (tables.tree() != &tree || tables.vertex_count() != tree.size() || !tables.has_choices() ||
      tables.kappa() != std::min(spec.kappa, n) || tables.lambda() != std::min(spec.lambda, n) ||
      !tables.has_rows(tree.root())) {
    throw Error(ErrorCode::kTableMismatch, "tables do not belong to this tree/spec");
  }
}

void add_subtree(const RootedTree& tree, Vertex u, std::vector<Vertex>& out) {
  std::vector<Vertex> stack{u};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (Vertex c : tree.children(v)) stack.push_back(c);
  }
}

}  // namespace

Rational expansion(const RootedTree& tree, std::span<const Vertex> part, bool include_potentials) {
  if (part.empty()) throw Error(ErrorCode::kEmptyPart, "expansion of an empty set");
  std::vector<std::uint8_t> in(tree.size(), 0);
  for (Vertex v : part) in[v] = 1;
  BigInt boundary = 0;
  BigInt weight = 0;
  BigInt potential = 0;
  for (Vertex v : part) {
    weight += tree.scaled_weight(v);
    potential += tree.scaled_potential(v);
    Vertex p = tree.parent(v);
    if (p != kNoVertex && !in[p]) boundary += tree.scaled_cost(v);
    for (Vertex c : tree.children(v)) {
      if (!in[c]) boundary += tree.scaled_cost(c);
    }
  }
  if (include_potentials) boundary += potential;
  return Rational(boundary, weight);
}

void fill_expansions(const RootedTree& tree, Subpartition& sub, bool include_potentials) {
  sub.expansions.clear();
  sub.max_expansion = 0;
  for (const auto& part : sub.parts) {
    std::vector<Vertex> ids;
    ids.reserve(part.size());
    for (const std::string& id : part) {
      auto v = tree.find(id);
      if (!v) throw Error(ErrorCode::kUnknownVertexId, "'" + id + "'");
      ids.push_back(*v);
    }
    Rational phi = expansion(tree, ids, include_potentials);
    sub.max_expansion = std::max(sub.max_expansion, phi);
    sub.expansions.push_back(std::move(phi));
  }
}

std::optional<Subpartition> reconstruct_at(const RootedTree& tree, const ProblemSpec& spec,
                                           const DpTables& tables, int k, int l) {
  check_tables(tree, spec, tables);
  if (!tables.mu(tree.root(), k, l)) return std::nullopt;

  std::vector<std::vector<Vertex>> parts;
  std::vector<Vertex> residue;
  std::vector<Task> stack{{Task::kFeasible, tree.root(), k, l, 0}};

  while (!stack.empty()) {
    Task task = stack.back();
    stack.pop_back();
    const Vertex u = task.u;
    const auto children = tree.children(u);

    if (task.kind == Task::kFeasible) {
      if (task.k == 0) {
        add_subtree(tree, u, residue);
        continue;
      }
      switch (tables.choice(u, task.k, task.l)) {
        case Choice::kGammaWitness:
        case Choice::kLeafPart:
          parts.emplace_back();
          stack.push_back({Task::kRootPart, u, task.k, task.l, parts.size() - 1});
          break;
        case Choice::kResidueRoot: {
          residue.push_back(u);
          int kk = task.k;
          int ll = task.l - 1;
          for (std::size_t step = children.size(); step >= 1; --step) {
            DpTables::Split s = tables.residue_split(u, step, kk, ll);
            stack.push_back({Task::kFeasible, children[step - 1], kk - s.k, ll - s.l, 0});
            kk = s.k;
            ll = s.l;
          }
          break;
        }
        case Choice::kLeafResidue:
          residue.push_back(u);
          break;
        case Choice::kInfeasible:
          throw Error(ErrorCode::kTableMismatch,
                      "backtrack reached an infeasible cell at '" + tree.label(u) + "'");
      }
      continue;
    }

    // u joins part task.part, which is the root part of T_u.
    parts[task.part].push_back(u);
    int kk = task.k;
    int ll = task.l;
    for (std::size_t step = children.size(); step >= 1; --step) {
      DpTables::Split s = tables.gamma_split(u, step, kk, ll);
      const int k_child = kk + 1 - s.k;
      const int l_child = ll - s.l;
      const Vertex c = children[step - 1];
      if (tables.edge_cut(u, step, k_child, l_child)) {
        stack.push_back({Task::kFeasible, c, k_child - 1, l_child, 0});
      } else {
        stack.push_back({Task::kRootPart, c, k_child, l_child, task.part});
      }
      kk = s.k;
      ll = s.l;
    }
  }

  Subpartition sub;
  for (auto& part : parts) {
    std::sort(part.begin(), part.end());
    std::vector<std::string> ids;
    ids.reserve(part.size());
    for (Vertex v : part) ids.push_back(tree.label(v));
    sub.parts.push_back(std::move(ids));
  }
  std::sort(residue.begin(), residue.end());
  for (Vertex v : residue) sub.residue.push_back(tree.label(v));
  fill_expansions(tree, sub, spec.use_potentials);
  return sub;
}

std::optional<Subpartition> reconstruct_subpartition(const RootedTree& tree,
                                                     const ProblemSpec& spec,
                                                     const DpTables& tables) {
  if (spec.kappa > static_cast<int>(tree.size())) return std::nullopt;
  return reconstruct_at(tree, spec, tables, spec.kappa, spec.lambda);
}

const char* violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kPartCount: return "PartCount";
    case ViolationKind::kEmptyPart: return "EmptyPart";
    case ViolationKind::kUnknownVertex: return "UnknownVertex";
    case ViolationKind::kOverlap: return "Overlap";
    case ViolationKind::kDisconnectedPart: return "DisconnectedPart";
    case ViolationKind::kCoverage: return "Coverage";
    case ViolationKind::kResidueTooLarge: return "ResidueTooLarge";
    case ViolationKind::kExpansionTooLarge: return "ExpansionTooLarge";
    case ViolationKind::kForbiddenInResidue: return "ForbiddenInResidue";
  }
  return "Unknown";
}

std::vector<Violation> validate_subpartition(const RootedTree& tree, const ProblemSpec& spec,
                                             const Subpartition& sub) {
  std::vector<Violation> out;
  const std::size_t n = tree.size();
  // 0 = unassigned, i + 1 = part i, kResidueMark = residue.
  constexpr std::size_t kResidueMark = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, 0);

  if (static_cast<int>(sub.parts.size()) != spec.kappa) {
    out.push_back({ViolationKind::kPartCount, std::to_string(sub.parts.size()) + " parts, expected " +
                                                  std::to_string(spec.kappa)});
  }

  std::vector<std::vector<Vertex>> parts(sub.parts.size());
  for (std::size_t i = 0; i < sub.parts.size(); ++i) {
    if (sub.parts[i].empty()) {
      out.push_back({ViolationKind::kEmptyPart, "part " + std::to_string(i)});
      continue;
    }
    for (const std::string& id : sub.parts[i]) {
      auto v = tree.find(id);
      if (!v) {
        out.push_back({ViolationKind::kUnknownVertex, "'" + id + "'"});
        continue;
      }
      if (owner[*v] != 0) {
        out.push_back({ViolationKind::kOverlap, "'" + id + "' appears twice"});
        continue;
      }
      owner[*v] = i + 1;
      parts[i].push_back(*v);
    }
  }
  std::vector<Vertex> residue;
  for (const std::string& id : sub.residue) {
    auto v = tree.find(id);
    if (!v) {
      out.push_back({ViolationKind::kUnknownVertex, "'" + id + "'"});
      continue;
    }
    if (owner[*v] != 0) {
      out.push_back({ViolationKind::kOverlap, "'" + id + "' is in a part and in the residue"});
      continue;
    }
    owner[*v] = kResidueMark;
    residue.push_back(*v);
  }
  for (Vertex v = 0; v < n; ++v) {
    if (owner[v] == 0) {
      out.push_back({ViolationKind::kCoverage, "'" + tree.label(v) + "' is in no part and not in the residue"});
    }
  }

  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) continue;
    // A vertex set of a tree is connected iff exactly one member has its
    // parent outside the set.
    std::size_t tops = 0;
    for (Vertex v : parts[i]) {
      Vertex p = tree.parent(v);
      if (p == kNoVertex || owner[p] != i + 1) ++tops;
    }
    if (tops != 1) out.push_back({ViolationKind::kDisconnectedPart, "part " + std::to_string(i)});
    Rational phi = expansion(tree, parts[i], spec.use_potentials);
    if (phi > spec.xi) {
      out.push_back({ViolationKind::kExpansionTooLarge,
                     "part " + std::to_string(i) + " has expansion " + format_rational(phi)});
    }
  }

  if (static_cast<int>(residue.size()) > spec.lambda) {
    out.push_back({ViolationKind::kResidueTooLarge, std::to_string(residue.size()) + " outliers"});
  }
  for (const std::string& id : spec.forbidden_outliers) {
    auto v = tree.find(id);
    if (v && owner[*v] == kResidueMark) {
      out.push_back({ViolationKind::kForbiddenInResidue, "'" + id + "'"});
    }
  }
  return out;
}

}  // namespace treecut
