#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ilseval/core/model.hpp"

namespace ilseval::dtree {

struct LabeledRecord {
  std::string id;
  Assignment features;  // may omit factors that do not apply to the record's system
  std::string label;
};

struct CategoricalTest {
  std::string value;  // left iff equal
};

struct ThresholdTest {
  double threshold{0.0};  // left iff <=
};

struct SplitTest {
  std::string factor;
  std::variant<CategoricalTest, ThresholdTest> test;

  bool categorical() const noexcept { return std::holds_alternative<CategoricalTest>(test); }
  /// Throws UnknownCategoricalValue on a type mismatch.
  bool goes_left(const FactorValue& value) const;
};

struct Leaf {
  std::string label;
  std::size_t support{0};
  std::map<std::string, std::size_t> class_counts;
  /// Set when identical feature vectors carry different labels.
  bool impure{false};
  /// Distinct training feature vectors routed here, sorted.
  std::vector<Assignment> observed;
};

struct Node {
  std::optional<SplitTest> split;  // empty for leaves
  std::size_t left{0};
  std::size_t right{0};
  Leaf leaf;

  bool is_leaf() const noexcept { return !split.has_value(); }
};

struct ObservedRange {
  double min{0.0};
  double max{0.0};
};

/// Binary tree stored in preorder; node 0 is the root.
class DecisionTree {
 public:
  DecisionTree() = default;
  /// Throws InvalidTree unless the nodes form a single tree rooted at 0
  /// whose tests name schema factors of the right kind.
  DecisionTree(FactorSchema schema, std::vector<Node> nodes, std::map<std::string, ObservedRange> observed_ranges = {});

  const FactorSchema& schema() const noexcept { return schema_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  const std::map<std::string, ObservedRange>& observed_ranges() const noexcept { return ranges_; }

  std::vector<std::size_t> leaves() const;
  std::size_t internal_count() const noexcept;
  std::size_t leaf_count() const noexcept { return nodes_.size() - internal_count(); }
  /// Node indices from the root down to (and including) the given node.
  std::vector<std::size_t> path_to(std::size_t index) const;

 private:
  FactorSchema schema_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> parent_;
  std::map<std::string, ObservedRange> ranges_;
};

/// Recursive description of a hand-built tree.
struct TreeSpec {
  std::optional<SplitTest> split;
  std::string label;
  std::vector<TreeSpec> children;  // empty, or {left, right}

  static TreeSpec leaf(std::string label);
  static TreeSpec node(std::string factor, std::string equals, TreeSpec left, TreeSpec right);
  static TreeSpec node(std::string factor, double threshold, TreeSpec left, TreeSpec right);
};

DecisionTree make_tree(FactorSchema schema, const TreeSpec& spec);

struct Prediction {
  std::string label;
  std::size_t leaf{0};
  /// Continuous factors whose value lies outside the training range.
  std::vector<std::string> extrapolation_flags;
};

Prediction predict(const DecisionTree& tree, const Assignment& features);

struct Relevance {
  std::vector<std::string> relevant;    // tested on the path, in path order
  std::vector<std::string> irrelevant;  // applicable to the leaf's records yet never tested
};

Relevance relevance(const DecisionTree& tree, std::size_t leaf);

struct FactorUsage {
  std::string factor;
  std::size_t tests{0};            // internal nodes testing it
  std::size_t relevant_leaves{0};  // leaves whose path tests it
};

std::vector<FactorUsage> factor_usage(const DecisionTree& tree);

}  // namespace ilseval::dtree
