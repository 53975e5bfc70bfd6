#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "support.hpp"
#include "treecut/error.hpp"
#include "treecut/io.hpp"

using namespace treecut;
using namespace treecut::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidProblem;
}

WeightedGraph csv(const std::string& text) {
  std::istringstream in(text);
  return io::parse_edge_csv(in);
}

std::vector<std::pair<std::string, std::string>> tree_edges(const RootedTree& t) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto& e : t.edge_specs()) out.push_back(std::minmax(e.u, e.v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("id ordering") {
  CHECK(id_less("2", "10"));
  CHECK(id_less("10", "a"));
  CHECK(id_less("a", "b"));
  CHECK_FALSE(id_less("b", "a"));
}

TEST_CASE("csv triangle") {
  WeightedGraph g = csv("u,v,cost\na,b,3\nb,c,2\na,c,1\n");
  CHECK(g.size() == 3);
  CHECK(g.edges().size() == 3);
  CHECK(g.vertices()[0].weight == 1);
}

TEST_CASE("csv errors name the line and field") {
  try {
    csv("u,v,cost\na,b,1\nb,c,0\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("cost") != std::string::npos);
  }
  CHECK(code_of([] { csv("u,v,cost\na,b,x\n"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { csv("u,v,cost\na,b\n"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { csv("u,v,cost\na,b,-2\n"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { csv(""); }) == ErrorCode::kParseError);
  CHECK(code_of([] { csv("u,v,cost\na,a,1\n"); }) == ErrorCode::kSelfLoop);
  CHECK(code_of([] { csv("u,v,cost\na,b,1\nb,a,2\n"); }) == ErrorCode::kDuplicateEdge);
}

TEST_CASE("maximum similarity spanning tree") {
  Forest f = similarity_spanning_tree(csv("u,v,cost\na,b,3\nb,c,2\na,c,1\n"));
  REQUIRE(f.trees.size() == 1);
  CHECK(tree_edges(f.trees[0]) ==
        std::vector<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "c"}});
  // distance column overrides 1/cost
  Forest g = similarity_spanning_tree(csv("u,v,cost,distance\na,b,3,9\nb,c,2,1\na,c,1,1\n"));
  CHECK(tree_edges(g.trees[0]) ==
        std::vector<std::pair<std::string, std::string>>{{"a", "c"}, {"b", "c"}});
  CHECK(g.trees[0].parent_edge_cost(*g.trees[0].find("c")) +
            g.trees[0].parent_edge_cost(*g.trees[0].find("a")) +
            g.trees[0].parent_edge_cost(*g.trees[0].find("b")) ==
        3);  // original similarities kept
}

TEST_CASE("spanning tree ties are deterministic") {
  // Square with equal costs: (min id, max id) order keeps ab, ad, bc.
  const std::string text = "u,v,cost\nc,d,1\nb,c,1\na,d,1\na,b,1\n";
  Forest f = similarity_spanning_tree(csv(text));
  CHECK(tree_edges(f.trees[0]) ==
        std::vector<std::pair<std::string, std::string>>{{"a", "b"}, {"a", "d"}, {"b", "c"}});
  CHECK(f.trees[0].label(f.trees[0].root()) == "a");
  for (int i = 0; i < 3; ++i) CHECK(tree_edges(similarity_spanning_tree(csv(text)).trees[0]) == tree_edges(f.trees[0]));
}

TEST_CASE("spanning tree of a tree is itself; components become trees") {
  std::mt19937_64 rng(1);
  RootedTree t = random_tree(rng, 12);
  Forest f = similarity_spanning_tree(graph_from_tree(t));
  REQUIRE(f.trees.size() == 1);
  CHECK(tree_edges(f.trees[0]) == tree_edges(t));
  Forest two = similarity_spanning_tree(csv("u,v,cost\na,b,1\nc,d,1\n"));
  CHECK(two.trees.size() == 2);
  CHECK(code_of([] { similarity_spanning_tree(WeightedGraph::build({}, {})); }) ==
        ErrorCode::kEmptyGraph);
}

TEST_CASE("tree json round trip") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    RootedTree t = random_tree(rng, 1 + static_cast<int>(rng() % 15), {4, 4, trial % 2 ? 2 : 0});
    io::Json doc = io::tree_to_json(t);
    auto back = io::parse_json_instance(io::Json::parse(doc.dump()));
    REQUIRE(std::holds_alternative<RootedTree>(back));
    const RootedTree& u = std::get<RootedTree>(back);
    CHECK(io::tree_to_json(u).dump() == doc.dump());
    for (Vertex v = 0; v < t.size(); ++v) {
      CHECK(u.subtree_weight(*u.find(t.label(v))) == t.subtree_weight(v));
    }
  }
}

TEST_CASE("tree json accepts decimals, fractions and numbers") {
  auto doc = io::Json::parse(R"({"root": 1, "vertices": [{"id": 1, "weight": "0.5"},
    {"id": "2", "weight": 2, "potential": "1/3"}], "edges": [{"u": 1, "v": 2, "cost": "0.25"}]})");
  RootedTree t = io::parse_tree_json(doc);
  CHECK(t.weight(*t.find("1")) == Rational(1, 2));
  CHECK(t.potential(*t.find("2")) == Rational(1, 3));
  CHECK(t.parent_edge_cost(*t.find("2")) == Rational(1, 4));
  CHECK(code_of([] { io::parse_tree_json(io::Json::parse(R"({"root": "a"})")); }) ==
        ErrorCode::kParseError);
  CHECK(code_of([] {
          io::parse_tree_json(io::Json::parse(
              R"({"root": "a", "vertices": [{"id": "a", "weight": "x"}], "edges": []})"));
        }) == ErrorCode::kParseError);
}

TEST_CASE("graph json") {
  auto g = io::parse_graph_json(io::Json::parse(
      R"({"vertices": [{"id": "a", "weight": 2}, {"id": "b"}], "edges": [{"u": "a", "v": "b", "cost": 1, "distance": 4}]})"));
  CHECK(g.size() == 2);
  CHECK(g.vertices()[0].weight == 2);
  CHECK(g.edges()[0].distance == Rational(4));
}

TEST_CASE("witness json and dot") {
  Subpartition s{{{"a", "b"}, {"c"}}, {"d"}, {Rational(1, 2), 1}, 1};
  io::Json j = io::witness_to_json(s);
  CHECK(j.dump() ==
        R"({"parts":[["a","b"],["c"]],"residue":["d"],"expansions":["1/2","1/1"],"max_expansion":"1/1"})");
  Forest f;
  f.trees.push_back(unit_path(4, "a"));
  std::ostringstream out;
  io::write_dot(out, f, &s);
  const std::string dot = out.str();
  CHECK(dot.find("graph treecut") == 0);
  CHECK(dot.find("\"d\" [shape=box") != std::string::npos);
  CHECK(dot.find("\"a\" -- \"b\"") != std::string::npos);
}
