#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "support.hpp"
#include "treecut/error.hpp"
#include "treecut/oracle.hpp"
#include "treecut/reconstruct.hpp"

using namespace treecut;
using namespace treecut::testing;

namespace {

std::optional<Subpartition> witness(const RootedTree& t, const ProblemSpec& spec) {
  Decision d = decide_cmsc(t, spec);
  return reconstruct_subpartition(t, spec, d.tables);
}

std::vector<Vertex> ids(const RootedTree& t, std::vector<std::string> names) {
  std::vector<Vertex> out;
  for (auto& n : names) out.push_back(*t.find(n));
  return out;
}

bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST_CASE("path witness") {
  RootedTree path = tree_of({{"a", 1}, {"b", 1}}, {{"a", "b", 1}}, "a");
  auto w = witness(path, {1, 2, 0});
  REQUIRE(w);
  auto parts = w->parts;
  std::sort(parts.begin(), parts.end());
  CHECK(parts == std::vector<std::vector<std::string>>{{"a"}, {"b"}});
  CHECK(w->residue.empty());
  CHECK(w->max_expansion == 1);
}

TEST_CASE("whole tree at xi = 0") {
  std::mt19937_64 rng(2);
  for (int i = 1; i < 12; ++i) {
    RootedTree t = random_tree(rng, i);
    auto w = witness(t, {0, 1, 0});
    REQUIRE(w);
    REQUIRE(w->parts.size() == 1);
    CHECK(w->parts[0].size() == t.size());
    CHECK(w->max_expansion == 0);
  }
}

TEST_CASE("star with one outlier at xi = 1/3") {
  RootedTree star = unit_star();
  ProblemSpec spec{Rational(1, 3), 1, 1};
  auto w = witness(star, spec);
  REQUIRE(w);
  CHECK(w->parts.size() == 1);
  CHECK(w->max_expansion <= Rational(1, 3));
  CHECK(validate_subpartition(star, spec, *w).empty());
  // With the residue slot forced on a leaf the part is r plus two leaves.
  Subpartition three{{{"r", "x", "y"}}, {"z"}, {}, 0};
  fill_expansions(star, three, false);
  CHECK(three.max_expansion == Rational(1, 3));
  CHECK(validate_subpartition(star, spec, three).empty());
}

TEST_CASE("expansion") {
  RootedTree star = unit_star();
  CHECK(expansion(star, ids(star, {"x"}), false) == 1);
  CHECK(expansion(star, ids(star, {"r", "x", "y"}), false) == Rational(1, 3));
  CHECK(expansion(star, ids(star, {"r", "x", "y", "z"}), false) == 0);
  RootedTree pot = tree_of({{"r", 1, 1}, {"x", 1, 2}}, {{"r", "x", 1}}, "r");
  CHECK(expansion(pot, ids(pot, {"r", "x"}), true) == Rational(3, 2));
  CHECK_THROWS_AS(expansion(star, {}, false), Error);
}

TEST_CASE("validation catches each defect") {
  RootedTree path = unit_path(3, "a");
  ProblemSpec spec{10, 2, 1};
  Subpartition overlap{{{"a"}, {"a", "b"}}, {"c"}, {}, 0};
  CHECK(has_kind(validate_subpartition(path, spec, overlap), ViolationKind::kOverlap));
  Subpartition split{{{"a", "c"}, {"b"}}, {}, {}, 0};
  CHECK(has_kind(validate_subpartition(path, spec, split), ViolationKind::kDisconnectedPart));
  Subpartition count{{{"a", "b", "c"}}, {}, {}, 0};
  CHECK(has_kind(validate_subpartition(path, spec, count), ViolationKind::kPartCount));
  Subpartition unknown{{{"a"}, {"q"}}, {"b", "c"}, {}, 0};
  CHECK(has_kind(validate_subpartition(path, spec, unknown), ViolationKind::kUnknownVertex));
  Subpartition empty{{{"a"}, {}}, {"b", "c"}, {}, 0};
  CHECK(has_kind(validate_subpartition(path, spec, empty), ViolationKind::kEmptyPart));
  Subpartition uncovered{{{"a"}, {"b"}}, {}, {}, 0};
  CHECK(has_kind(validate_subpartition(path, spec, uncovered), ViolationKind::kCoverage));
  Subpartition residue{{{"a"}, {"b"}}, {"c"}, {}, 0};
  CHECK(has_kind(validate_subpartition(path, {10, 2, 0}, residue),
                 ViolationKind::kResidueTooLarge));
  CHECK(has_kind(validate_subpartition(path, {Rational(1, 2), 2, 1}, residue),
                 ViolationKind::kExpansionTooLarge));
  CHECK(has_kind(validate_subpartition(path, {10, 2, 1, false, {"c"}}, residue),
                 ViolationKind::kForbiddenInResidue));
  CHECK(validate_subpartition(path, spec, residue).empty());
}

TEST_CASE("reconstruction rejects foreign tables") {
  RootedTree a = unit_star();
  RootedTree b = unit_path(4, "a");
  Decision d = decide_cmsc(a, {1, 2, 0});
  CHECK_THROWS_AS(reconstruct_subpartition(b, {1, 2, 0}, d.tables), Error);
  CHECK_THROWS_AS(reconstruct_subpartition(a, {1, 3, 0}, d.tables), Error);
  SolveOptions lean;
  lean.retain_tables = false;
  Decision thin = decide_cmsc(a, {1, 2, 0}, lean);
  CHECK_THROWS_AS(reconstruct_subpartition(a, {1, 2, 0}, thin.tables), Error);
  Decision no = decide_cmsc(a, {Rational(1, 3), 2, 1});
  CHECK_FALSE(reconstruct_subpartition(a, {Rational(1, 3), 2, 1}, no.tables).has_value());
}

TEST_CASE("every Yes reconstructs to a valid witness, from every reachable cell") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const bool pot = trial % 4 == 0;
    RootedTree t = random_tree(rng, n, {4, 4, pot ? 2 : 0});
    auto ratios = oracle::ratio_set(t, pot);
    const Rational xi = ratios[rng() % ratios.size()];
    std::vector<std::string> forbid;
    if (trial % 5 == 0) forbid.push_back(t.label(rng() % n));
    ProblemSpec spec{xi, 3, 2, pot, forbid};
    Decision d = decide_cmsc(t, spec);
    for (int k = 1; k <= 3; ++k) {
      for (int l = 0; l <= 2; ++l) {
        if (!d.tables.mu(t.root(), k, l)) continue;
        auto w = reconstruct_at(t, spec, d.tables, k, l);
        REQUIRE(w);
        ProblemSpec at = spec;
        at.kappa = k;
        at.lambda = l;
        auto v = validate_subpartition(t, at, *w);
        CHECK(v.empty());
        if (!v.empty()) MESSAGE(violation_name(v[0].kind) << ": " << v[0].detail);
      }
    }
  }
}
