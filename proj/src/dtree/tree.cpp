#include "ilseval/dtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ilseval::dtree {

bool SplitTest::goes_left(const FactorValue& value) const {
  if (const auto* c = std::get_if<CategoricalTest>(&test)) {
    const auto* s = std::get_if<std::string>(&value);
    if (s == nullptr) {
      throw Error(Errc::UnknownCategoricalValue, "factor " + factor + " expects a category, got " + format_value(value));
    }
    return *s == c->value;
  }
  const auto* d = std::get_if<double>(&value);
  if (d == nullptr) {
    throw Error(Errc::UnknownCategoricalValue, "factor " + factor + " expects a number, got " + format_value(value));
  }
  return *d <= std::get<ThresholdTest>(test).threshold;
}

DecisionTree::DecisionTree(FactorSchema schema, std::vector<Node> nodes, std::map<std::string, ObservedRange> observed_ranges)
    : schema_(std::move(schema)), nodes_(std::move(nodes)), ranges_(std::move(observed_ranges)) {
  if (nodes_.empty()) throw Error(Errc::InvalidTree, "tree has no nodes");
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  parent_.assign(nodes_.size(), kNone);
  std::vector<bool> seen(nodes_.size(), false);
  seen[0] = true;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.is_leaf()) {
      if (n.leaf.label.empty()) throw Error(Errc::InvalidTree, "leaf " + std::to_string(i) + " has no label");
      continue;
    }
    const Factor* f = schema_.find(n.split->factor);
    if (f == nullptr) throw Error(Errc::InvalidTree, "node " + std::to_string(i) + " tests unknown factor " + n.split->factor);
    if (f->categorical() != n.split->categorical()) {
      throw Error(Errc::InvalidTree, "node " + std::to_string(i) + " applies the wrong test kind to " + f->name);
    }
    if (const auto* c = std::get_if<CategoricalTest>(&n.split->test)) {
      const auto& vals = f->categories().values;
      if (std::find(vals.begin(), vals.end(), c->value) == vals.end()) {
        throw Error(Errc::InvalidTree, "node " + std::to_string(i) + " tests undeclared value " + c->value);
      }
    } else if (!std::isfinite(std::get<ThresholdTest>(n.split->test).threshold)) {
      throw Error(Errc::InvalidTree, "node " + std::to_string(i) + " has a non-finite threshold");
    }
    for (std::size_t child : {n.left, n.right}) {
      if (child <= i || child >= nodes_.size() || seen[child]) {
        throw Error(Errc::InvalidTree, "node " + std::to_string(i) + " has an invalid child index");
      }
      seen[child] = true;
      parent_[child] = i;
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!seen[i]) throw Error(Errc::InvalidTree, "node " + std::to_string(i) + " is unreachable");
  }
}

std::vector<std::size_t> DecisionTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) out.push_back(i);
  }
  return out;
}

std::size_t DecisionTree::internal_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return !n.is_leaf(); }));
}

std::vector<std::size_t> DecisionTree::path_to(std::size_t index) const {
  if (index >= nodes_.size()) throw Error(Errc::InvalidArgument, "node index out of range");
  std::vector<std::size_t> path{index};
  while (path.back() != 0) path.push_back(parent_[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

TreeSpec TreeSpec::leaf(std::string label) {
  TreeSpec s;
  s.label = std::move(label);
  return s;
}

TreeSpec TreeSpec::node(std::string factor, std::string equals, TreeSpec left, TreeSpec right) {
  TreeSpec s;
  s.split = SplitTest{std::move(factor), CategoricalTest{std::move(equals)}};
  s.children.push_back(std::move(left));
  s.children.push_back(std::move(right));
  return s;
}

TreeSpec TreeSpec::node(std::string factor, double threshold, TreeSpec left, TreeSpec right) {
  TreeSpec s;
  s.split = SplitTest{std::move(factor), ThresholdTest{threshold}};
  s.children.push_back(std::move(left));
  s.children.push_back(std::move(right));
  return s;
}

DecisionTree make_tree(FactorSchema schema, const TreeSpec& spec) {
  std::vector<Node> nodes;
  std::function<std::size_t(const TreeSpec&)> emit = [&](const TreeSpec& s) -> std::size_t {
    const std::size_t idx = nodes.size();
    nodes.emplace_back();
    if (!s.split) {
      if (!s.children.empty()) throw Error(Errc::InvalidTree, "leaf spec with children");
      nodes[idx].leaf.label = s.label;
      return idx;
    }
    if (s.children.size() != 2) throw Error(Errc::InvalidTree, "split spec needs exactly two children");
    nodes[idx].split = s.split;
    const std::size_t l = emit(s.children[0]);
    const std::size_t r = emit(s.children[1]);
    nodes[idx].left = l;
    nodes[idx].right = r;
    return idx;
  };
  emit(spec);
  return DecisionTree(std::move(schema), std::move(nodes));
}

Prediction predict(const DecisionTree& tree, const Assignment& features) {
  const FactorSchema& schema = tree.schema();
  Prediction out;
  for (const auto& [name, value] : features) {
    const Factor* f = schema.find(name);
    if (f == nullptr) throw Error(Errc::UnknownFactor, "unknown factor " + name);
    if (f->categorical()) {
      const auto* s = std::get_if<std::string>(&value);
      const auto& vals = f->categories().values;
      if (s == nullptr || std::find(vals.begin(), vals.end(), *s) == vals.end()) {
        throw Error(Errc::UnknownCategoricalValue, "factor " + name + " has no value " + format_value(value));
      }
    } else if (!std::holds_alternative<double>(value)) {
      throw Error(Errc::UnknownCategoricalValue, "factor " + name + " expects a number, got " + format_value(value));
    }
  }
  for (const Factor& f : schema.factors()) {
    auto it = features.find(f.name);
    auto range = tree.observed_ranges().find(f.name);
    if (it == features.end() || range == tree.observed_ranges().end()) continue;
    const double v = std::get<double>(it->second);
    if (v < range->second.min || v > range->second.max) out.extrapolation_flags.push_back(f.name);
  }
  std::size_t i = 0;
  while (!tree.node(i).is_leaf()) {
    const Node& n = tree.node(i);
    auto it = features.find(n.split->factor);
    if (it == features.end()) throw Error(Errc::MissingFactor, "prediction needs factor " + n.split->factor);
    i = n.split->goes_left(it->second) ? n.left : n.right;
  }
  out.leaf = i;
  out.label = tree.node(i).leaf.label;
  return out;
}

Relevance relevance(const DecisionTree& tree, std::size_t leaf) {
  if (leaf >= tree.nodes().size() || !tree.node(leaf).is_leaf()) {
    throw Error(Errc::InvalidArgument, "node " + std::to_string(leaf) + " is not a leaf");
  }
  Relevance out;
  for (std::size_t i : tree.path_to(leaf)) {
    const Node& n = tree.node(i);
    if (n.is_leaf()) continue;
    if (std::find(out.relevant.begin(), out.relevant.end(), n.split->factor) == out.relevant.end()) {
      out.relevant.push_back(n.split->factor);
    }
  }
  const auto& observed = tree.node(leaf).leaf.observed;
  for (const Factor& f : tree.schema().factors()) {
    if (std::find(out.relevant.begin(), out.relevant.end(), f.name) != out.relevant.end()) continue;
    const bool applicable = std::all_of(observed.begin(), observed.end(),
                                        [&](const Assignment& a) { return a.find(f.name) != a.end(); });
    if (applicable) out.irrelevant.push_back(f.name);
  }
  return out;
}

std::vector<FactorUsage> factor_usage(const DecisionTree& tree) {
  std::vector<FactorUsage> out;
  for (const Factor& f : tree.schema().factors()) out.push_back({f.name, 0, 0});
  auto slot = [&](const std::string& name) -> FactorUsage& {
    return out[*tree.schema().index_of(name)];
  };
  for (const Node& n : tree.nodes()) {
    if (!n.is_leaf()) ++slot(n.split->factor).tests;
  }
  for (std::size_t leaf : tree.leaves()) {
    for (const std::string& name : relevance(tree, leaf).relevant) ++slot(name).relevant_leaves;
  }
  return out;
}

}  // namespace ilseval::dtree
