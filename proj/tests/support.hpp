#pragma once

#include <random>
#include <string>
#include <vector>

#include "treecut/dp_solver.hpp"
#include "treecut/graph.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut::testing {

inline RootedTree tree_of(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges,
                          const std::string& root) {
  return RootedTree::build(vertices, edges, root);
}

// r with leaves x, y, z; unit weights and costs.
inline RootedTree unit_star() {
  return tree_of({{"r", 1}, {"x", 1}, {"y", 1}, {"z", 1}},
                 {{"r", "x", 1}, {"r", "y", 1}, {"r", "z", 1}}, "r");
}

inline RootedTree unit_path(int n, const std::string& root) {
  std::vector<VertexSpec> vs;
  std::vector<EdgeSpec> es;
  for (int i = 0; i < n; ++i) vs.push_back({std::string(1, static_cast<char>('a' + i)), 1});
  for (int i = 0; i + 1 < n; ++i) es.push_back({vs[i].id, vs[i + 1].id, 1});
  return tree_of(vs, es, root);
}

inline std::string vid(int i) { return "v" + std::to_string(i); }

// Edges of the labeled tree with this Pruefer sequence (n = seq.size() + 2).
inline std::vector<std::pair<int, int>> prufer_edges(const std::vector<int>& seq) {
  const int n = static_cast<int>(seq.size()) + 2;
  std::vector<int> degree(n, 1);
  for (int x : seq) ++degree[x];
  std::vector<std::pair<int, int>> edges;
  for (int x : seq) {
    for (int leaf = 0; leaf < n; ++leaf) {
      if (degree[leaf] == 1) {
        edges.push_back({leaf, x});
        --degree[leaf];
        --degree[x];
        break;
      }
    }
  }
  int a = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) {
      if (a < 0) {
        a = v;
      } else {
        edges.push_back({a, v});
      }
    }
  }
  return edges;
}

struct RandomTreeOptions {
  int weight_max = 4;
  int cost_max = 4;
  int potential_max = 0;  // 0 disables potentials
};

inline RootedTree tree_from_edges(std::mt19937_64& rng, int n,
                                  const std::vector<std::pair<int, int>>& edges,
                                  const RandomTreeOptions& o = {}) {
  std::uniform_int_distribution<int> w(1, o.weight_max), c(1, o.cost_max),
      p(0, std::max(o.potential_max, 0));
  std::vector<VertexSpec> vs;
  for (int i = 0; i < n; ++i) {
    VertexSpec s{vid(i), w(rng)};
    if (o.potential_max > 0) s.potential = p(rng);
    vs.push_back(s);
  }
  std::vector<EdgeSpec> es;
  for (auto [a, b] : edges) es.push_back({vid(a), vid(b), c(rng)});
  std::uniform_int_distribution<int> root(0, n - 1);
  return RootedTree::build(vs, es, vid(root(rng)));
}

inline std::vector<std::pair<int, int>> random_tree_edges(std::mt19937_64& rng, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    edges.push_back({parent(rng), v});
  }
  return edges;
}

inline RootedTree random_tree(std::mt19937_64& rng, int n, const RandomTreeOptions& o = {}) {
  return tree_from_edges(rng, n, random_tree_edges(rng, n), o);
}

// Every (u, k, l) cell of mu, gamma and choice agrees.
inline bool same_tables(const RootedTree& tree, const DpTables& a, const DpTables& b) {
  if (a.kappa() != b.kappa() || a.lambda() != b.lambda()) return false;
  for (Vertex u = 0; u < tree.size(); ++u) {
    if (a.kcap(u) != b.kcap(u) || a.lcap(u) != b.lcap(u)) return false;
    for (int k = 0; k <= a.kappa(); ++k) {
      for (int l = 0; l <= a.lambda(); ++l) {
        if (a.mu(u, k, l) != b.mu(u, k, l)) return false;
        if (a.has_choices() && b.has_choices() && a.choice(u, k, l) != b.choice(u, k, l)) {
          return false;
        }
        if (k >= 1 && a.gamma(u, k, l) != b.gamma(u, k, l)) return false;
      }
    }
  }
  return true;
}

}  // namespace treecut::testing
