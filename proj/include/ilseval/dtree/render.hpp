#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "ilseval/dtree/tree.hpp"

namespace ilseval::dtree {

enum class RenderFormat { Dot, Text, Json };

inline constexpr std::string_view kTreeFormatName = "ilseval-decision-tree";
inline constexpr int kTreeFormatVersion = 1;

std::string render(const DecisionTree& tree, RenderFormat format);
std::string render_dot(const DecisionTree& tree);
std::string render_text(const DecisionTree& tree);

/// Edge labels of an internal node: "= v" / "≠ v" (or "= w" when the factor
/// has exactly two declared values), "≤ θ" / "> θ".
std::pair<std::string, std::string> edge_labels(const DecisionTree& tree, std::size_t node);

nlohmann::json tree_to_json(const DecisionTree& tree);
/// Throws SchemaError on malformed documents and InvalidTree on bad structure.
DecisionTree tree_from_json(const nlohmann::json& doc);
DecisionTree load_tree(std::string_view json_text);
DecisionTree load_tree_file(const std::string& path);

}  // namespace ilseval::dtree
