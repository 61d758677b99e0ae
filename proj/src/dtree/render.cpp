#include "ilseval/dtree/render.hpp"

#include <functional>
#include <sstream>

#include "ilseval/ingest/manifest.hpp"
#include "ilseval/util/text.hpp"

namespace ilseval::dtree {

using nlohmann::json;

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::SchemaError, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

json leaf_to_json(const Leaf& leaf) {
  json j;
  j["label"] = leaf.label;
  j["support"] = leaf.support;
  j["class_counts"] = json::object();
  for (const auto& [label, c] : leaf.class_counts) j["class_counts"][label] = c;
  j["impure"] = leaf.impure;
  j["observed"] = json::array();
  for (const Assignment& a : leaf.observed) j["observed"].push_back(ingest::assignment_to_json(a));
  return j;
}

json node_to_json(const DecisionTree& tree, std::size_t i) {
  const Node& n = tree.node(i);
  if (n.is_leaf()) return json{{"leaf", leaf_to_json(n.leaf)}};
  json j;
  j["factor"] = n.split->factor;
  if (const auto* c = std::get_if<CategoricalTest>(&n.split->test)) {
    j["equals"] = c->value;
  } else {
    j["threshold"] = std::get<ThresholdTest>(n.split->test).threshold;
  }
  j["left"] = node_to_json(tree, n.left);
  j["right"] = node_to_json(tree, n.right);
  return j;
}

Leaf leaf_from_json(const json& j, const std::string& where) {
  Leaf leaf;
  const json& label = field(j, "label", where);
  if (!label.is_string()) fail(where + ".label", "expected a string");
  leaf.label = label.get<std::string>();
  const json& support = field(j, "support", where);
  if (!support.is_number_unsigned()) fail(where + ".support", "expected a non-negative integer");
  leaf.support = support.get<std::size_t>();
  if (j.contains("class_counts")) {
    const json& cc = j["class_counts"];
    if (!cc.is_object()) fail(where + ".class_counts", "expected an object");
    for (auto it = cc.begin(); it != cc.end(); ++it) {
      if (!it->is_number_unsigned()) fail(where + ".class_counts." + it.key(), "expected a count");
      leaf.class_counts[it.key()] = it->get<std::size_t>();
    }
  }
  if (j.contains("impure")) {
    if (!j["impure"].is_boolean()) fail(where + ".impure", "expected a boolean");
    leaf.impure = j["impure"].get<bool>();
  }
  if (j.contains("observed")) {
    const json& obs = j["observed"];
    if (!obs.is_array()) fail(where + ".observed", "expected an array");
    for (std::size_t k = 0; k < obs.size(); ++k) {
      leaf.observed.push_back(ingest::assignment_from_json(obs[k], where + ".observed[" + std::to_string(k) + "]"));
    }
  }
  return leaf;
}

void nodes_from_json(const json& j, const std::string& where, std::vector<Node>& nodes) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::size_t at = nodes.size();
  nodes.emplace_back();
  if (j.contains("leaf")) {
    nodes[at].leaf = leaf_from_json(j["leaf"], where + ".leaf");
    return;
  }
  SplitTest test;
  const json& factor = field(j, "factor", where);
  if (!factor.is_string()) fail(where + ".factor", "expected a string");
  test.factor = factor.get<std::string>();
  if (j.contains("equals")) {
    if (!j["equals"].is_string()) fail(where + ".equals", "expected a string");
    test.test = CategoricalTest{j["equals"].get<std::string>()};
  } else if (j.contains("threshold")) {
    if (!j["threshold"].is_number()) fail(where + ".threshold", "expected a number");
    test.test = ThresholdTest{j["threshold"].get<double>()};
  } else {
    fail(where, "internal node needs 'equals' or 'threshold'");
  }
  nodes[at].split = std::move(test);
  nodes[at].left = nodes.size();
  nodes_from_json(field(j, "left", where), where + ".left", nodes);
  nodes[at].right = nodes.size();
  nodes_from_json(field(j, "right", where), where + ".right", nodes);
}

}  // namespace

std::pair<std::string, std::string> edge_labels(const DecisionTree& tree, std::size_t node) {
  const Node& n = tree.node(node);
  if (n.is_leaf()) throw Error(Errc::InvalidArgument, "leaves have no edges");
  if (const auto* c = std::get_if<CategoricalTest>(&n.split->test)) {
    const Factor* f = tree.schema().find(n.split->factor);
    const auto& vals = f->categories().values;
    if (vals.size() == 2) {
      return {"= " + c->value, "= " + (vals[0] == c->value ? vals[1] : vals[0])};
    }
    return {"= " + c->value, "≠ " + c->value};
  }
  const std::string t = text::format_double(std::get<ThresholdTest>(n.split->test).threshold);
  return {"≤ " + t, "> " + t};
}

std::string render_dot(const DecisionTree& tree) {
  std::ostringstream os;
  os << "digraph decision_tree {\n";
  os << "  node [fontname=\"Helvetica\"];\n";
  os << "  edge [fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const Node& n = tree.node(i);
    if (n.is_leaf()) {
      os << "  n" << i << " [shape=box, style=rounded, label=\"" << dot_escape(n.leaf.label) << "\\nn="
         << n.leaf.support << (n.leaf.impure ? " (impure)" : "") << "\"];\n";
    } else {
      os << "  n" << i << " [shape=ellipse, label=\"" << dot_escape(n.split->factor) << "\"];\n";
    }
  }
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const Node& n = tree.node(i);
    if (n.is_leaf()) continue;
    const auto [l, r] = edge_labels(tree, i);
    os << "  n" << i << " -> n" << n.left << " [label=\"" << dot_escape(l) << "\"];\n";
    os << "  n" << i << " -> n" << n.right << " [label=\"" << dot_escape(r) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string render_text(const DecisionTree& tree) {
  std::ostringstream os;
  std::function<void(std::size_t, int)> walk = [&](std::size_t i, int depth) {
    const Node& n = tree.node(i);
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (n.is_leaf()) {
      os << pad << "-> " << n.leaf.label << " (n=" << n.leaf.support << (n.leaf.impure ? ", impure" : "") << ")\n";
      return;
    }
    const auto [l, r] = edge_labels(tree, i);
    os << pad << n.split->factor << " " << l << "\n";
    walk(n.left, depth + 1);
    os << pad << n.split->factor << " " << r << "\n";
    walk(n.right, depth + 1);
  };
  walk(0, 0);
  return os.str();
}

json tree_to_json(const DecisionTree& tree) {
  json j;
  j["format"] = std::string(kTreeFormatName);
  j["version"] = kTreeFormatVersion;
  j["schema"] = ingest::schema_to_json(StudySchema(tree.schema()));
  j["observed_ranges"] = json::object();
  for (const auto& [name, r] : tree.observed_ranges()) j["observed_ranges"][name] = {r.min, r.max};
  j["root"] = node_to_json(tree, 0);
  return j;
}

DecisionTree tree_from_json(const json& doc) {
  const json& format = field(doc, "format", "$");
  if (!format.is_string() || format.get<std::string>() != kTreeFormatName) fail("$.format", "not a decision tree document");
  const json& version = field(doc, "version", "$");
  if (!version.is_number_integer() || version.get<int>() != kTreeFormatVersion) {
    fail("$.version", "unsupported version");
  }
  FactorSchema schema = ingest::schema_from_json(field(doc, "schema", "$"), "$.schema").factors();
  std::map<std::string, ObservedRange> ranges;
  if (doc.contains("observed_ranges")) {
    const json& r = doc["observed_ranges"];
    if (!r.is_object()) fail("$.observed_ranges", "expected an object");
    for (auto it = r.begin(); it != r.end(); ++it) {
      if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
        fail("$.observed_ranges." + it.key(), "expected [min, max]");
      }
      ranges[it.key()] = ObservedRange{(*it)[0].get<double>(), (*it)[1].get<double>()};
    }
  }
  std::vector<Node> nodes;
  nodes_from_json(field(doc, "root", "$"), "$.root", nodes);
  return DecisionTree(std::move(schema), std::move(nodes), std::move(ranges));
}

DecisionTree load_tree(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, std::string("tree document: ") + e.what());
  }
  return tree_from_json(doc);
}

DecisionTree load_tree_file(const std::string& path) { return load_tree(text::read_file(path)); }

std::string render(const DecisionTree& tree, RenderFormat format) {
  switch (format) {
    case RenderFormat::Dot:
      return render_dot(tree);
    case RenderFormat::Text:
      return render_text(tree);
    case RenderFormat::Json:
      return ingest::dump_json(tree_to_json(tree));
  }
  return {};
}

}  // namespace ilseval::dtree
