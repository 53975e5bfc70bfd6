#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "treecut/error.hpp"
#include "treecut/io.hpp"
#include "treecut/search.hpp"

using namespace treecut;
using io::Json;

namespace {

struct Flags {
  std::string input;
  std::string format;
  std::string xi;
  int parts = 1;
  int outliers = 0;
  bool potentials = false;
  std::vector<std::string> forbid;
  std::vector<std::string> require;
  std::string mode = "exact";
  std::string tol = "1/1000";
  int threads = 1;
  std::string emit_dot;
};

io::Instance load(const Flags& f) {
  std::optional<io::Format> fmt;
  if (f.format == "csv") fmt = io::Format::kCsv;
  if (f.format == "json") fmt = io::Format::kJson;
  return io::load_instance(f.input, fmt);
}

// Graph inputs must be forests; the tree-side problem is solved per component.
Forest as_forest(const WeightedGraph& g, bool potentials) {
  return forest_after_deletion(g, std::vector<bool>(g.size(), false),
                               std::vector<Rational>(g.size(), Rational(0)), potentials);
}

SearchOptions search_options(const Flags& f) {
  SearchOptions o;
  if (f.mode == "tol") {
    o.mode = SearchMode::kTolerance;
    o.tolerance = parse_rational(f.tol);
  }
  o.use_potentials = f.potentials;
  o.forbidden_outliers = f.forbid;
  o.threads = f.threads;
  return o;
}

void emit_dot(const Flags& f, const Forest& forest, const Subpartition* witness) {
  if (f.emit_dot.empty()) return;
  std::ofstream out(f.emit_dot);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write '" + f.emit_dot + "'");
  io::write_dot(out, forest, witness);
}

Json optimization_json(const OptimizationResult& r) {
  Json doc;
  doc["xi_star"] = r.xi_star ? Json(format_rational(*r.xi_star)) : Json(nullptr);
  if (r.witness) doc["witness"] = io::witness_to_json(*r.witness);
  doc["probes"] = r.probes;
  doc["mode"] = r.mode == SearchMode::kExact ? "exact" : "tol";
  if (r.mode == SearchMode::kTolerance) doc["tolerance"] = format_rational(r.tolerance);
  return doc;
}

int run_decide(const Flags& f) {
  const Rational xi = parse_rational(f.xi);
  io::Instance inst = load(f);
  ForestDecision d;
  Forest forest;
  if (auto* tree = std::get_if<RootedTree>(&inst); tree && f.require.empty()) {
    ProblemSpec spec{xi, f.parts, f.outliers, f.potentials, f.forbid};
    Decision dec = decide_cmsc(*tree, spec);
    d.feasible = dec.feasible;
    if (dec.feasible) d.witness = reconstruct_subpartition(*tree, spec, dec.tables);
    forest.trees.push_back(*tree);
  } else {
    WeightedGraph g = tree ? graph_from_tree(*tree) : std::get<WeightedGraph>(inst);
    d = decide_semisupervised(g, f.require, f.forbid, xi, f.parts, f.outliers, f.potentials,
                              f.threads);
    std::vector<bool> none(g.size(), false);
    for (const auto& id : f.require) none[*g.find(id)] = true;
    forest = forest_after_deletion(g, none, std::vector<Rational>(g.size(), Rational(0)), false);
  }
  Json doc;
  doc["feasible"] = d.feasible;
  if (d.witness) doc["witness"] = io::witness_to_json(*d.witness);
  std::cout << doc.dump(2) << "\n";
  emit_dot(f, forest, d.witness ? &*d.witness : nullptr);
  return d.feasible ? 0 : 1;
}

int run_optimize(const Flags& f) {
  io::Instance inst = load(f);
  OptimizationResult r;
  Forest forest;
  if (auto* tree = std::get_if<RootedTree>(&inst)) {
    r = min_xi(*tree, f.parts, f.outliers, search_options(f));
    forest.trees.push_back(*tree);
  } else {
    forest = as_forest(std::get<WeightedGraph>(inst), f.potentials);
    r = min_xi(forest, f.parts, f.outliers, search_options(f));
  }
  std::cout << optimization_json(r).dump(2) << "\n";
  emit_dot(f, forest, r.witness ? &*r.witness : nullptr);
  return r.xi_star ? 0 : 1;
}

int run_kmax(const Flags& f) {
  const Rational xi = parse_rational(f.xi);
  io::Instance inst = load(f);
  int k = 0;
  if (auto* tree = std::get_if<RootedTree>(&inst)) {
    k = k_max(*tree, xi, f.outliers, search_options(f));
  } else {
    k = k_max(as_forest(std::get<WeightedGraph>(inst), f.potentials), xi, f.outliers,
              search_options(f));
  }
  Json doc;
  doc["k_max"] = k;
  std::cout << doc.dump(2) << "\n";
  return k > 0 ? 0 : 1;
}

int run_cluster(const Flags& f) {
  io::Instance inst = load(f);
  Forest forest;
  if (auto* tree = std::get_if<RootedTree>(&inst)) {
    forest.trees.push_back(*tree);
  } else {
    forest = similarity_spanning_tree(std::get<WeightedGraph>(inst));
  }
  OptimizationResult r = min_xi(forest, f.parts, f.outliers, search_options(f));
  Json doc;
  doc["spanning_forest"] = io::forest_to_json(forest);
  doc["expansions_measured_on"] = "spanning_forest";
  Json result = optimization_json(r);
  for (auto& [key, value] : result.items()) doc[key] = value;
  std::cout << doc.dump(2) << "\n";
  emit_dot(f, forest, r.witness ? &*r.witness : nullptr);
  return r.xi_star ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact connected multi-way sparsest cut on trees"};
  app.require_subcommand(1);
  Flags f;
  if (const char* env = std::getenv("TREECUT_THREADS")) {
    try {
      f.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "error: TREECUT_THREADS must be an integer\n";
      return 2;
    }
  }

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", f.input, "Tree/graph JSON or edge CSV")->required();
    sub->add_option("--format", f.format, "json or csv (default: by extension)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--outliers,-l", f.outliers, "Residue budget lambda")->check(CLI::NonNegativeNumber);
    sub->add_flag("--potentials", f.potentials, "Add vertex potentials to expansions");
    sub->add_option("--forbid", f.forbid, "Ids that may not be outliers")->delimiter(',');
    sub->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto search_flags = [&](CLI::App* sub) {
    sub->add_option("--parts,-k", f.parts, "Number of parts kappa")->check(CLI::PositiveNumber);
    sub->add_option("--mode", f.mode, "exact or tol")->check(CLI::IsMember({"exact", "tol"}));
    sub->add_option("--tol", f.tol, "Tolerance for --mode tol (p/q or decimal)");
    sub->add_option("--emit-dot", f.emit_dot, "Write a DOT rendering of the witness");
  };

  CLI::App* decide = app.add_subcommand("decide", "Is there a subpartition with expansion <= xi?");
  common(decide);
  decide->add_option("--xi", f.xi, "Threshold (p/q or decimal)")->required();
  decide->add_option("--parts,-k", f.parts, "Number of parts kappa")->check(CLI::PositiveNumber);
  decide->add_option("--require-outlier", f.require, "Ids that must be outliers")->delimiter(',');
  decide->add_option("--emit-dot", f.emit_dot, "Write a DOT rendering of the witness");

  CLI::App* optimize = app.add_subcommand("optimize", "Minimum feasible xi");
  common(optimize);
  search_flags(optimize);

  CLI::App* kmax = app.add_subcommand("kmax", "Largest feasible number of parts");
  common(kmax);
  kmax->add_option("--xi", f.xi, "Threshold (p/q or decimal)")->required();

  CLI::App* cluster = app.add_subcommand("cluster", "Spanning tree of a similarity graph, then optimize");
  common(cluster);
  search_flags(cluster);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*decide) return run_decide(f);
    if (*optimize) return run_optimize(f);
    if (*kmax) return run_kmax(f);
    return run_cluster(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
