#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "treecut/graph.hpp"
#include "treecut/reconstruct.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut::io {

using Json = nlohmann::ordered_json;

enum class Format { kJson, kCsv };

/// A JSON object with "root" is a tree; anything else is a graph.
using Instance = std::variant<RootedTree, WeightedGraph>;

/// Format defaults to the file extension (.csv, otherwise JSON).
Instance load_instance(const std::string& path, std::optional<Format> format = std::nullopt);

Instance parse_json_instance(const Json& doc);
RootedTree parse_tree_json(const Json& doc);
WeightedGraph parse_graph_json(const Json& doc);
/// `u,v,cost[,distance]` with a header row. Vertex weights default to 1.
/// Throws ParseError naming the line and field.
WeightedGraph parse_edge_csv(std::istream& in);

Json tree_to_json(const RootedTree& tree);
Json forest_to_json(const Forest& forest);
Json witness_to_json(const Subpartition& sub);

/// Parts get fill colors, residue vertices are drawn as boxes.
void write_dot(std::ostream& out, const Forest& forest, const Subpartition* witness);

}  // namespace treecut::io
