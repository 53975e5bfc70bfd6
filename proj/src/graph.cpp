#include "treecut/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "treecut/error.hpp"

namespace treecut {

namespace {

bool is_integer_id(std::string_view s) {
  if (s.empty() || s.size() > 18) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Builds one rooted tree per component of the kept edges.
Forest assemble(const WeightedGraph& g, const std::vector<bool>& removed,
                const std::vector<std::size_t>& kept_edges, const std::vector<Rational>& potential,
                bool root_heaviest) {
  const std::size_t n = g.size();
  DisjointSets comps(n);
  for (std::size_t e : kept_edges) {
    auto [a, b] = g.endpoints(e);
    comps.unite(a, b);
  }
  std::vector<std::size_t> comp_of(n, n);
  std::vector<std::size_t> comp_roots;
  for (std::size_t v = 0; v < n; ++v) {
    if (removed[v]) continue;
    std::size_t r = comps.find(v);
    if (comp_of[r] == n) {
      comp_of[r] = comp_roots.size();
      comp_roots.push_back(v);
    }
  }
  const std::size_t c = comp_roots.size();
  std::vector<std::vector<VertexSpec>> vs(c);
  std::vector<std::vector<EdgeSpec>> es(c);
  std::vector<std::size_t> root(c);
  for (std::size_t i = 0; i < c; ++i) root[i] = comp_roots[i];
  for (std::size_t v = 0; v < n; ++v) {
    if (removed[v]) continue;
    std::size_t i = comp_of[comps.find(v)];
    const GraphVertex& gv = g.vertices()[v];
    vs[i].push_back({gv.id, gv.weight, potential[v]});
    if (root_heaviest && gv.weight > g.vertices()[root[i]].weight) root[i] = v;
  }
  for (std::size_t e : kept_edges) {
    auto [a, b] = g.endpoints(e);
    std::size_t i = comp_of[comps.find(a)];
    const GraphEdge& ge = g.edges()[e];
    es[i].push_back({g.vertices()[a].id, g.vertices()[b].id, ge.cost});
  }
  Forest forest;
  forest.trees.reserve(c);
  for (std::size_t i = 0; i < c; ++i) {
    forest.trees.push_back(RootedTree::build(vs[i], es[i], g.vertices()[root[i]].id));
  }
  return forest;
}

}  // namespace

bool id_less(std::string_view a, std::string_view b) {
  const bool ia = is_integer_id(a);
  const bool ib = is_integer_id(b);
  if (ia && ib) return std::stoll(std::string(a)) < std::stoll(std::string(b));
  if (ia != ib) return ia;
  return a < b;
}

WeightedGraph WeightedGraph::build(std::vector<GraphVertex> vertices, std::vector<GraphEdge> edges) {
  WeightedGraph g;
  std::sort(vertices.begin(), vertices.end(),
            [](const GraphVertex& x, const GraphVertex& y) { return id_less(x.id, y.id); });
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const GraphVertex& v = vertices[i];
    if (!g.index_.emplace(v.id, i).second) {
      throw Error(ErrorCode::kDuplicateVertexId, "vertex '" + v.id + "' listed twice");
    }
    if (v.weight <= 0) throw Error(ErrorCode::kNonPositiveVertexWeight, "vertex '" + v.id + "'");
    if (v.potential < 0) throw Error(ErrorCode::kNegativeValue, "potential of '" + v.id + "'");
  }
  g.vertices_ = std::move(vertices);

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const GraphEdge& e : edges) {
    auto a = g.find(e.u);
    auto b = g.find(e.v);
    if (!a) throw Error(ErrorCode::kUnknownVertexId, "'" + e.u + "'");
    if (!b) throw Error(ErrorCode::kUnknownVertexId, "'" + e.v + "'");
    if (*a == *b) throw Error(ErrorCode::kSelfLoop, "at '" + e.u + "'");
    if (e.cost <= 0) throw Error(ErrorCode::kNegativeValue, "cost of " + e.u + "-" + e.v + " must be positive");
    if (e.distance && *e.distance <= 0) {
      throw Error(ErrorCode::kNegativeValue, "distance of " + e.u + "-" + e.v + " must be positive");
    }
    if (!seen.emplace(std::min(*a, *b), std::max(*a, *b)).second) {
      throw Error(ErrorCode::kDuplicateEdge, e.u + "-" + e.v);
    }
    g.ends_.emplace_back(*a, *b);
  }
  g.edges_ = std::move(edges);
  return g;
}

std::optional<std::size_t> WeightedGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WeightedGraph graph_from_tree(const RootedTree& tree) {
  std::vector<GraphVertex> vs;
  for (const VertexSpec& v : tree.vertex_specs()) vs.push_back({v.id, v.weight, v.potential});
  std::vector<GraphEdge> es;
  for (const EdgeSpec& e : tree.edge_specs()) es.push_back({e.u, e.v, e.cost, std::nullopt});
  return WeightedGraph::build(std::move(vs), std::move(es));
}

Forest similarity_spanning_tree(const WeightedGraph& graph) {
  if (graph.size() == 0) throw Error(ErrorCode::kEmptyGraph, "no vertices");
  const auto& edges = graph.edges();
  std::vector<Rational> distance(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    distance[i] = edges[i].distance ? *edges[i].distance : Rational(1) / edges[i].cost;
  }
  std::vector<std::size_t> by_key(edges.size());
  std::iota(by_key.begin(), by_key.end(), 0);
  std::sort(by_key.begin(), by_key.end(), [&](std::size_t x, std::size_t y) {
    if (distance[x] != distance[y]) return distance[x] < distance[y];
    auto [xa, xb] = graph.endpoints(x);
    auto [ya, yb] = graph.endpoints(y);
    // Vertex indices follow id order.
    auto xk = std::make_pair(std::min(xa, xb), std::max(xa, xb));
    auto yk = std::make_pair(std::min(ya, yb), std::max(ya, yb));
    return xk < yk;
  });

  DisjointSets dsu(graph.size());
  std::vector<std::size_t> kept;
  for (std::size_t e : by_key) {
    auto [a, b] = graph.endpoints(e);
    if (dsu.unite(a, b)) kept.push_back(e);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<Rational> potential;
  potential.reserve(graph.size());
  for (const GraphVertex& v : graph.vertices()) potential.push_back(v.potential);
  return assemble(graph, std::vector<bool>(graph.size(), false), kept, potential, true);
}

Forest forest_after_deletion(const WeightedGraph& graph, const std::vector<bool>& removed,
                             const std::vector<Rational>& extra_potential,
                             bool keep_own_potentials) {
  DisjointSets dsu(graph.size());
  std::vector<std::size_t> kept;
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    auto [a, b] = graph.endpoints(e);
    if (removed[a] || removed[b]) continue;
    if (!dsu.unite(a, b)) {
      throw Error(ErrorCode::kNotForestAfterDeletion,
                  "cycle through edge " + graph.edges()[e].u + "-" + graph.edges()[e].v);
    }
    kept.push_back(e);
  }
  std::vector<Rational> potential(graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v) {
    potential[v] = extra_potential[v];
    if (keep_own_potentials) potential[v] += graph.vertices()[v].potential;
  }
  return assemble(graph, removed, kept, potential, false);
}

}  // namespace treecut
