#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treecut/rooted_tree.hpp"

namespace treecut {

struct GraphVertex {
  std::string id;
  Rational weight = 1;
  Rational potential = 0;
};

struct GraphEdge {
  std::string u;
  std::string v;
  Rational cost;                     // similarity; the cut cost
  std::optional<Rational> distance;  // overrides 1/cost for spanning trees
};

/// Orders ids numerically when both are integers, lexicographically otherwise
/// (integers first).
bool id_less(std::string_view a, std::string_view b);

/// Simple undirected graph with positive similarities. Vertices are stored in
/// id_less order; edges keep their input order with u, v as given.
class WeightedGraph {
 public:
  /// Throws SelfLoop, DuplicateEdge, UnknownVertexId, DuplicateVertexId,
  /// NonPositiveVertexWeight, NegativeValue (cost <= 0, distance <= 0, potential < 0).
  static WeightedGraph build(std::vector<GraphVertex> vertices, std::vector<GraphEdge> edges);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<GraphVertex>& vertices() const { return vertices_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::optional<std::size_t> find(std::string_view id) const;
  /// Endpoint indices of edge i.
  std::pair<std::size_t, std::size_t> endpoints(std::size_t i) const { return ends_[i]; }

 private:
  std::vector<GraphVertex> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<std::pair<std::size_t, std::size_t>> ends_;
  std::unordered_map<std::string, std::size_t> index_;
};

WeightedGraph graph_from_tree(const RootedTree& tree);

/// Maximum spanning forest with respect to similarity (minimum with respect to
/// distance: the per-edge override when present, else 1/cost). Tree edges keep
/// their original similarity as cost. Each component is rooted at its heaviest
/// vertex, smallest id on ties. Equal keys are ordered by (min id, max id).
/// Throws EmptyGraph.
Forest similarity_spanning_tree(const WeightedGraph& graph);

/// The components of the graph with `removed` vertices deleted, as rooted
/// trees (root = first vertex of the component in id order). Each kept
/// vertex's potential becomes extra_potential[v] plus its own potential when
/// keep_own_potentials is set. Throws NotForestAfterDeletion on a cycle.
Forest forest_after_deletion(const WeightedGraph& graph, const std::vector<bool>& removed,
                             const std::vector<Rational>& extra_potential,
                             bool keep_own_potentials);

}  // namespace treecut
