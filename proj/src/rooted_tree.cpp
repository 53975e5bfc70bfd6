#include "treecut/rooted_tree.hpp"

#include <algorithm>

#include "treecut/error.hpp"

namespace treecut {

RootedTree RootedTree::build(std::span<const VertexSpec> vertices, std::span<const EdgeSpec> edges,
                             std::string_view root) {
  RootedTree t;
  const std::size_t n = vertices.size();
  if (n == 0) throw Error(ErrorCode::kNotATree, "tree has no vertices");

  t.label_.reserve(n);
  t.index_.reserve(n);
  BigInt scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const VertexSpec& vs = vertices[i];
    if (!t.index_.emplace(vs.id, i).second) {
      throw Error(ErrorCode::kDuplicateVertexId, "vertex '" + vs.id + "' listed twice");
    }
    t.label_.push_back(vs.id);
    if (vs.weight <= 0) {
      throw Error(ErrorCode::kNonPositiveVertexWeight, "vertex '" + vs.id + "'");
    }
    if (vs.potential < 0) {
      throw Error(ErrorCode::kNegativeValue, "potential of vertex '" + vs.id + "'");
    }
    scale = lcm_of(scale, denominator_of(vs.weight));
    scale = lcm_of(scale, denominator_of(vs.potential));
  }

  auto lookup = [&](const std::string& id) {
    auto it = t.index_.find(id);
    if (it == t.index_.end()) throw Error(ErrorCode::kUnknownVertexId, "'" + id + "'");
    return it->second;
  };

  if (edges.size() + 1 != n) {
    throw Error(ErrorCode::kNotATree, std::to_string(n) + " vertices but " +
                                          std::to_string(edges.size()) + " edges");
  }

  // Adjacency in edge order (CSR).
  std::vector<std::size_t> degree(n + 1, 0);
  std::vector<std::pair<Vertex, Vertex>> ends;
  ends.reserve(edges.size());
  for (const EdgeSpec& e : edges) {
    Vertex a = lookup(e.u);
    Vertex b = lookup(e.v);
    if (a == b) throw Error(ErrorCode::kNotATree, "self-loop at '" + e.u + "'");
    if (e.cost < 0) throw Error(ErrorCode::kNegativeValue, "cost of edge " + e.u + "-" + e.v);
    scale = lcm_of(scale, denominator_of(e.cost));
    ends.emplace_back(a, b);
    ++degree[a + 1];
    ++degree[b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) degree[i + 1] += degree[i];
  std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
  std::vector<std::pair<Vertex, std::size_t>> adjacency(2 * edges.size());
  for (std::size_t i = 0; i < ends.size(); ++i) {
    adjacency[fill[ends[i].first]++] = {ends[i].second, i};
    adjacency[fill[ends[i].second]++] = {ends[i].first, i};
  }

  t.root_ = lookup(std::string(root));
  t.parent_.assign(n, kNoVertex);
  std::vector<std::size_t> parent_edge(n, edges.size());
  std::vector<Vertex> bfs;
  bfs.reserve(n);
  std::vector<bool> seen(n, false);
  bfs.push_back(t.root_);
  seen[t.root_] = true;
  std::vector<std::size_t> child_count(n, 0);
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    Vertex v = bfs[head];
    for (std::size_t j = degree[v]; j < degree[v + 1]; ++j) {
      auto [w, edge] = adjacency[j];
      if (edge == parent_edge[v]) continue;
      if (seen[w]) throw Error(ErrorCode::kNotATree, "cycle through '" + t.label_[w] + "'");
      seen[w] = true;
      t.parent_[w] = v;
      parent_edge[w] = edge;
      ++child_count[v];
      bfs.push_back(w);
    }
  }
  if (bfs.size() != n) throw Error(ErrorCode::kNotATree, "graph is disconnected");

  t.child_begin_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) t.child_begin_[v + 1] = t.child_begin_[v] + child_count[v];
  t.child_list_.resize(n - 1);
  std::vector<std::size_t> cursor(t.child_begin_.begin(), t.child_begin_.end() - 1);
  for (std::size_t i = 1; i < bfs.size(); ++i) {
    Vertex w = bfs[i];
    t.child_list_[cursor[t.parent_[w]]++] = w;
  }
  t.order_.assign(bfs.rbegin(), bfs.rend());

  t.scale_ = scale;
  t.scaled_weight_.resize(n);
  t.scaled_potential_.resize(n);
  t.scaled_cost_.assign(n, BigInt(0));
  for (std::size_t i = 0; i < n; ++i) {
    t.scaled_weight_[i] = numerator_of(vertices[i].weight) * (scale / denominator_of(vertices[i].weight));
    t.scaled_potential_[i] =
        numerator_of(vertices[i].potential) * (scale / denominator_of(vertices[i].potential));
    if (t.scaled_potential_[i] != 0) t.has_potentials_ = true;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (v == t.root_) continue;
    const Rational& c = edges[parent_edge[v]].cost;
    t.scaled_cost_[v] = numerator_of(c) * (scale / denominator_of(c));
  }

  t.subtree_size_.assign(n, 1);
  t.scaled_subtree_weight_ = t.scaled_weight_;
  t.scaled_subtree_potential_ = t.scaled_potential_;
  for (Vertex v : t.order_) {
    Vertex p = t.parent_[v];
    if (p == kNoVertex) continue;
    t.subtree_size_[p] += t.subtree_size_[v];
    t.scaled_subtree_weight_[p] += t.scaled_subtree_weight_[v];
    t.scaled_subtree_potential_[p] += t.scaled_subtree_potential_[v];
  }
  return t;
}

std::optional<Vertex> RootedTree::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BigInt RootedTree::scaled_total_cost() const {
  BigInt total = 0;
  for (const BigInt& c : scaled_cost_) total += c;
  return total;
}

BigInt RootedTree::scaled_min_weight() const {
  return *std::min_element(scaled_weight_.begin(), scaled_weight_.end());
}

std::vector<VertexSpec> RootedTree::vertex_specs() const {
  std::vector<VertexSpec> out;
  out.reserve(size());
  for (Vertex v = 0; v < size(); ++v) out.push_back({label_[v], weight(v), potential(v)});
  return out;
}

std::vector<EdgeSpec> RootedTree::edge_specs() const {
  // Parents in breadth-first order, children in stored order, so a rebuild
  // reproduces the same child lists.
  std::vector<EdgeSpec> out;
  out.reserve(size() - 1);
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    for (Vertex c : children(*it)) out.push_back({label_[*it], label_[c], parent_edge_cost(c)});
  }
  return out;
}

std::span<const Vertex> processing_order(const RootedTree& tree) { return tree.order(); }

ScaledInstance::ScaledInstance(const RootedTree& tree, const Rational& xi)
    : tree_(&tree), xi_(xi), xi_num_(numerator_of(xi)), xi_den_(denominator_of(xi)) {
  if (xi < 0) throw Error(ErrorCode::kInvalidProblem, "xi must be nonnegative");
}

ScaledInstance scale_instance(const RootedTree& tree, const Rational& xi) {
  return ScaledInstance(tree, xi);
}

}  // namespace treecut
