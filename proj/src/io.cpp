#include "treecut/io.hpp"

#include <fstream>
#include <sstream>

#include "treecut/error.hpp"

namespace treecut::io {

namespace {

std::string id_text(const Json& v, const char* field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw Error(ErrorCode::kParseError, std::string("field '") + field + "' must be a string or integer");
}

Rational value_of(const Json& v, const char* field) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, std::string("field '") + field + "': " + e.what());
  }
  throw Error(ErrorCode::kParseError, std::string("field '") + field + "' must be a number or string");
}

const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

const Json& array_member(const Json& obj, const char* key) {
  const Json& a = member(obj, key);
  if (!a.is_array()) throw Error(ErrorCode::kParseError, std::string("'") + key + "' must be an array");
  return a;
}

std::string trim(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Instance load_instance(const std::string& path, std::optional<Format> format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + path + "'");
  if (!format) {
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    format = csv ? Format::kCsv : Format::kJson;
  }
  if (*format == Format::kCsv) return parse_edge_csv(in);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
  return parse_json_instance(doc);
}

Instance parse_json_instance(const Json& doc) {
  if (doc.is_object() && doc.contains("root")) return parse_tree_json(doc);
  return parse_graph_json(doc);
}

RootedTree parse_tree_json(const Json& doc) {
  std::vector<VertexSpec> vertices;
  for (const Json& v : array_member(doc, "vertices")) {
    VertexSpec s{id_text(member(v, "id"), "id"), value_of(member(v, "weight"), "weight")};
    if (v.contains("potential")) s.potential = value_of(v.at("potential"), "potential");
    vertices.push_back(std::move(s));
  }
  std::vector<EdgeSpec> edges;
  for (const Json& e : array_member(doc, "edges")) {
    edges.push_back({id_text(member(e, "u"), "u"), id_text(member(e, "v"), "v"),
                     value_of(member(e, "cost"), "cost")});
  }
  return RootedTree::build(vertices, edges, id_text(member(doc, "root"), "root"));
}

WeightedGraph parse_graph_json(const Json& doc) {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;
  for (const Json& e : array_member(doc, "edges")) {
    GraphEdge g{id_text(member(e, "u"), "u"), id_text(member(e, "v"), "v"),
                value_of(member(e, "cost"), "cost"), std::nullopt};
    if (e.contains("distance")) g.distance = value_of(e.at("distance"), "distance");
    edges.push_back(std::move(g));
  }
  if (doc.contains("vertices")) {
    for (const Json& v : array_member(doc, "vertices")) {
      GraphVertex g{id_text(member(v, "id"), "id")};
      if (v.contains("weight")) g.weight = value_of(v.at("weight"), "weight");
      if (v.contains("potential")) g.potential = value_of(v.at("potential"), "potential");
      vertices.push_back(std::move(g));
    }
  } else {
    std::vector<std::string> seen;
    for (const GraphEdge& e : edges) {
      seen.push_back(e.u);
      seen.push_back(e.v);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto& id : seen) vertices.push_back({id});
  }
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

WeightedGraph parse_edge_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<GraphEdge> edges;
  std::vector<std::string> ids;
  static const char* names[] = {"u", "v", "cost", "distance"};
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(trim(f));
    if (line.back() == ',') fields.push_back("");
    if (!header) {
      header = true;
      if (fields.size() < 3 || fields.size() > 4) {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(lineno) +
                                                ": header must be u,v,cost[,distance]");
      }
      continue;
    }
    if (fields.size() < 3 || fields.size() > 4) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(lineno) + ": expected 3 or 4 fields, got " +
                      std::to_string(fields.size()));
    }
    auto number = [&](std::size_t i) {
      Rational r;
      try {
        r = parse_rational(fields[i]);
      } catch (const Error& e) {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(lineno) + ", field '" +
                                                names[i] + "': " + e.what());
      }
      if (r <= 0) {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(lineno) + ", field '" +
                                                names[i] + "': must be positive");
      }
      return r;
    };
    for (std::size_t i = 0; i < 2; ++i) {
      if (fields[i].empty()) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(lineno) + ", field '" + names[i] + "': empty id");
      }
    }
    GraphEdge e{fields[0], fields[1], number(2), std::nullopt};
    if (fields.size() == 4 && !fields[3].empty()) e.distance = number(3);
    ids.push_back(e.u);
    ids.push_back(e.v);
    edges.push_back(std::move(e));
  }
  if (!header) throw Error(ErrorCode::kParseError, "empty CSV input");
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<GraphVertex> vertices;
  for (auto& id : ids) vertices.push_back({id});
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

Json tree_to_json(const RootedTree& tree) {
  Json doc;
  doc["root"] = tree.label(tree.root());
  Json vertices = Json::array();
  for (const VertexSpec& v : tree.vertex_specs()) {
    Json j;
    j["id"] = v.id;
    j["weight"] = format_rational(v.weight);
    if (tree.has_potentials()) j["potential"] = format_rational(v.potential);
    vertices.push_back(std::move(j));
  }
  Json edges = Json::array();
  for (const EdgeSpec& e : tree.edge_specs()) {
    edges.push_back(Json{{"u", e.u}, {"v", e.v}, {"cost", format_rational(e.cost)}});
  }
  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  return doc;
}

Json forest_to_json(const Forest& forest) {
  Json trees = Json::array();
  for (const RootedTree& t : forest.trees) trees.push_back(tree_to_json(t));
  return trees;
}

Json witness_to_json(const Subpartition& sub) {
  Json doc;
  doc["parts"] = sub.parts;
  doc["residue"] = sub.residue;
  Json ex = Json::array();
  for (const Rational& r : sub.expansions) ex.push_back(format_rational(r));
  doc["expansions"] = std::move(ex);
  doc["max_expansion"] = format_rational(sub.max_expansion);
  return doc;
}

void write_dot(std::ostream& out, const Forest& forest, const Subpartition* witness) {
  static const char* palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                  "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd"};
  std::unordered_map<std::string, int> part_of;
  std::unordered_map<std::string, bool> residue;
  if (witness) {
    for (std::size_t p = 0; p < witness->parts.size(); ++p) {
      for (const auto& id : witness->parts[p]) part_of[id] = static_cast<int>(p);
    }
    for (const auto& id : witness->residue) residue[id] = true;
  }
  out << "graph treecut {\n  node [style=filled, fillcolor=white];\n";
  for (const RootedTree& t : forest.trees) {
    for (Vertex v = 0; v < t.size(); ++v) {
      const std::string& id = t.label(v);
      out << "  " << dot_quote(id) << " [";
      if (auto it = part_of.find(id); it != part_of.end()) {
        out << "fillcolor=\"" << palette[it->second % std::size(palette)] << "\", label="
            << dot_quote(id + " (" + std::to_string(it->second) + ")");
      } else if (residue.count(id)) {
        out << "shape=box, fillcolor=\"#cccccc\", label=" << dot_quote(id);
      } else {
        out << "label=" << dot_quote(id);
      }
      out << "];\n";
    }
    for (const EdgeSpec& e : t.edge_specs()) {
      out << "  " << dot_quote(e.u) << " -- " << dot_quote(e.v) << " [label="
          << dot_quote(format_rational(e.cost)) << "];\n";
    }
  }
  out << "}\n";
}

}  // namespace treecut::io
