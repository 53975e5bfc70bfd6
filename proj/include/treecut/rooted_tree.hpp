#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treecut/rational.hpp"

namespace treecut {

using Vertex = std::size_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

struct VertexSpec {
  std::string id;
  Rational weight;
  Rational potential = 0;
};

struct EdgeSpec {
  std::string u;
  std::string v;
  Rational cost;
};

/// Weighted rooted tree. Immutable once built.
///
/// The root's parent edge is virtual and always costs 0. All rational inputs are
/// kept as integers over one common denominator (scale()); the rational views
/// below are reconstructed from those integers on demand.
class RootedTree {
 public:
  /// Vertices are indexed in input order. Children of each vertex follow the
  /// input edge order. Throws Error on malformed input.
  static RootedTree build(std::span<const VertexSpec> vertices, std::span<const EdgeSpec> edges,
                          std::string_view root);

  std::size_t size() const { return label_.size(); }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  std::span<const Vertex> children(Vertex v) const {
    return {child_list_.data() + child_begin_[v], child_list_.data() + child_begin_[v + 1]};
  }
  bool is_leaf(Vertex v) const { return child_begin_[v] == child_begin_[v + 1]; }

  const std::string& label(Vertex v) const { return label_[v]; }
  std::optional<Vertex> find(std::string_view label) const;

  /// Every child precedes its parent; the root is last.
  std::span<const Vertex> order() const { return order_; }

  std::size_t subtree_size(Vertex v) const { return subtree_size_[v]; }

  Rational weight(Vertex v) const { return Rational(scaled_weight_[v], scale_); }
  Rational parent_edge_cost(Vertex v) const { return Rational(scaled_cost_[v], scale_); }
  Rational potential(Vertex v) const { return Rational(scaled_potential_[v], scale_); }
  Rational subtree_weight(Vertex v) const { return Rational(scaled_subtree_weight_[v], scale_); }
  Rational subtree_potential(Vertex v) const {
    return Rational(scaled_subtree_potential_[v], scale_);
  }
  bool has_potentials() const { return has_potentials_; }

  /// Common denominator of every weight, cost and potential.
  const BigInt& scale() const { return scale_; }
  const BigInt& scaled_weight(Vertex v) const { return scaled_weight_[v]; }
  const BigInt& scaled_cost(Vertex v) const { return scaled_cost_[v]; }
  const BigInt& scaled_potential(Vertex v) const { return scaled_potential_[v]; }
  const BigInt& scaled_subtree_weight(Vertex v) const { return scaled_subtree_weight_[v]; }
  const BigInt& scaled_subtree_potential(Vertex v) const { return scaled_subtree_potential_[v]; }

  const BigInt& scaled_total_weight() const { return scaled_subtree_weight_[root_]; }
  const BigInt& scaled_total_potential() const { return scaled_subtree_potential_[root_]; }
  BigInt scaled_total_cost() const;
  BigInt scaled_min_weight() const;

  /// Vertex and edge lists that rebuild an identical tree.
  std::vector<VertexSpec> vertex_specs() const;
  std::vector<EdgeSpec> edge_specs() const;

 private:
  RootedTree() = default;

  std::vector<std::string> label_;
  std::unordered_map<std::string, Vertex> index_;
  Vertex root_ = kNoVertex;
  std::vector<Vertex> parent_;
  std::vector<std::size_t> child_begin_;
  std::vector<Vertex> child_list_;
  std::vector<Vertex> order_;
  std::vector<std::size_t> subtree_size_;

  BigInt scale_ = 1;
  std::vector<BigInt> scaled_weight_;
  std::vector<BigInt> scaled_cost_;
  std::vector<BigInt> scaled_potential_;
  std::vector<BigInt> scaled_subtree_weight_;
  std::vector<BigInt> scaled_subtree_potential_;
  bool has_potentials_ = false;
};

/// Disjoint trees with disjoint vertex id spaces.
struct Forest {
  std::vector<RootedTree> trees;
};

/// Reverse of a breadth-first sweep from the root.
std::span<const Vertex> processing_order(const RootedTree& tree);

/// A tree paired with a threshold xi = num/den (lowest terms). Every quantity
/// the solvers compare is multiplied by multiplier() = scale * den, which makes
/// xi * weight, costs and potentials all integral.
class ScaledInstance {
 public:
  ScaledInstance(const RootedTree& tree, const Rational& xi);

  const RootedTree& tree() const { return *tree_; }
  const Rational& xi() const { return xi_; }
  const BigInt& xi_num() const { return xi_num_; }
  const BigInt& xi_den() const { return xi_den_; }
  BigInt multiplier() const { return tree_->scale() * xi_den_; }

  /// c(e_v), xi * w(T_v), p(T_v), p(v) and w(v) in multiplier units.
  BigInt cost(Vertex v) const { return xi_den_ * tree_->scaled_cost(v); }
  BigInt xi_subtree_weight(Vertex v) const { return xi_num_ * tree_->scaled_subtree_weight(v); }
  BigInt xi_weight(Vertex v) const { return xi_num_ * tree_->scaled_weight(v); }
  BigInt subtree_potential(Vertex v) const {
    return xi_den_ * tree_->scaled_subtree_potential(v);
  }
  BigInt potential(Vertex v) const { return xi_den_ * tree_->scaled_potential(v); }

 private:
  const RootedTree* tree_;
  Rational xi_;
  BigInt xi_num_;
  BigInt xi_den_;
};

ScaledInstance scale_instance(const RootedTree& tree, const Rational& xi);

}  // namespace treecut
