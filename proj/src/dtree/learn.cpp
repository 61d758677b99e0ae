#include "ilseval/dtree/learn.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ilseval::dtree {

double gini(const std::map<std::string, std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum += p * p;
  }
  return 1.0 - sum;
}

namespace {

void validate_records(const std::vector<LabeledRecord>& records, const FactorSchema& schema) {
  std::vector<Violation> violations;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const LabeledRecord& rec = records[r];
    const std::string where = rec.id.empty() ? "record " + std::to_string(r) : rec.id;
    if (rec.label.empty()) violations.push_back({Errc::InvalidArgument, where, "empty label"});
    for (const auto& [name, value] : rec.features) {
      const Factor* f = schema.find(name);
      if (f == nullptr) {
        violations.push_back({Errc::UnknownFactor, where, "unknown factor " + name});
        continue;
      }
      if (f->categorical()) {
        const auto* s = std::get_if<std::string>(&value);
        const auto& vals = f->categories().values;
        if (s == nullptr || std::find(vals.begin(), vals.end(), *s) == vals.end()) {
          violations.push_back({Errc::ValueOutOfDomain, where, name + " = " + format_value(value)});
        }
      } else {
        const auto* d = std::get_if<double>(&value);
        if (d == nullptr || !std::isfinite(*d)) {
          violations.push_back({Errc::ValueOutOfDomain, where, name + " = " + format_value(value)});
        }
      }
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

struct Candidate {
  SplitTest test;
  double gain{0.0};
};

class Learner {
 public:
  Learner(const std::vector<LabeledRecord>& records, const FactorSchema& schema) : records_(records), schema_(schema) {}

  std::vector<Node> run() {
    std::vector<std::size_t> all(records_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(all);
    return std::move(nodes_);
  }

 private:
  std::map<std::string, std::size_t> count(const std::vector<std::size_t>& idx) const {
    std::map<std::string, std::size_t> counts;
    for (std::size_t i : idx) ++counts[records_[i].label];
    return counts;
  }

  double split_gain(const std::vector<std::size_t>& idx, double parent, const SplitTest& test) const {
    std::map<std::string, std::size_t> left, right;
    std::size_t nl = 0;
    for (std::size_t i : idx) {
      if (test.goes_left(records_[i].features.find(test.factor)->second)) {
        ++left[records_[i].label];
        ++nl;
      } else {
        ++right[records_[i].label];
      }
    }
    const std::size_t n = idx.size();
    const std::size_t nr = n - nl;
    const double wl = static_cast<double>(nl) / static_cast<double>(n);
    const double wr = static_cast<double>(nr) / static_cast<double>(n);
    return parent - wl * gini(left, nl) - wr * gini(right, nr);
  }

  std::optional<Candidate> best_split(const std::vector<std::size_t>& idx, double parent) const {
    std::optional<Candidate> best;
    auto consider = [&](SplitTest test) {
      const double g = split_gain(idx, parent, test);
      if (!best || g > best->gain + kGainTieTolerance) best = Candidate{std::move(test), g};
    };
    for (const Factor& f : schema_.factors()) {
      const bool defined = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) {
        return records_[i].features.find(f.name) != records_[i].features.end();
      });
      if (!defined) continue;
      if (f.categorical()) {
        std::set<std::string> values;
        for (std::size_t i : idx) values.insert(std::get<std::string>(records_[i].features.find(f.name)->second));
        if (values.size() < 2) continue;
        for (const std::string& v : values) consider(SplitTest{f.name, CategoricalTest{v}});
      } else {
        std::set<double> values;
        for (std::size_t i : idx) values.insert(std::get<double>(records_[i].features.find(f.name)->second));
        for (auto it = values.begin(); std::next(it) != values.end() && it != values.end(); ++it) {
          const double a = *it;
          const double b = *std::next(it);
          const double mid = a + (b - a) / 2.0;
          if (!(mid > a && mid < b)) continue;
          consider(SplitTest{f.name, ThresholdTest{mid}});
        }
      }
    }
    return best;
  }

  Leaf make_leaf(const std::vector<std::size_t>& idx, std::map<std::string, std::size_t> counts) const {
    Leaf leaf;
    leaf.support = idx.size();
    std::size_t top = 0;
    for (const auto& [label, c] : counts) {
      if (c > top) {
        top = c;
        leaf.label = label;
      }
    }
    leaf.impure = counts.size() > 1;
    leaf.class_counts = std::move(counts);
    std::set<Assignment> observed;
    for (std::size_t i : idx) observed.insert(records_[i].features);
    leaf.observed.assign(observed.begin(), observed.end());
    return leaf;
  }

  std::size_t grow(const std::vector<std::size_t>& idx) {
    const std::size_t at = nodes_.size();
    nodes_.emplace_back();
    auto counts = count(idx);
    if (counts.size() > 1) {
      const double parent = gini(counts, idx.size());
      if (auto cand = best_split(idx, parent)) {
        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
          (cand->test.goes_left(records_[i].features.find(cand->test.factor)->second) ? left : right).push_back(i);
        }
        nodes_[at].split = cand->test;
        const std::size_t l = grow(left);
        const std::size_t r = grow(right);
        nodes_[at].left = l;
        nodes_[at].right = r;
        return at;
      }
    }
    nodes_[at].leaf = make_leaf(idx, std::move(counts));
    return at;
  }

  const std::vector<LabeledRecord>& records_;
  const FactorSchema& schema_;
  std::vector<Node> nodes_;
};

}  // namespace

DecisionTree learn_tree(const std::vector<LabeledRecord>& records, const FactorSchema& schema) {
  if (records.empty()) throw Error(Errc::EmptyInput, "no labeled records");
  validate_records(records, schema);
  std::map<std::string, ObservedRange> ranges;
  for (const LabeledRecord& rec : records) {
    for (const auto& [name, value] : rec.features) {
      if (const auto* d = std::get_if<double>(&value)) {
        auto [it, fresh] = ranges.try_emplace(name, ObservedRange{*d, *d});
        if (!fresh) {
          it->second.min = std::min(it->second.min, *d);
          it->second.max = std::max(it->second.max, *d);
        }
      }
    }
  }
  Learner learner(records, schema);
  return DecisionTree(schema, learner.run(), std::move(ranges));
}

}  // namespace ilseval::dtree
