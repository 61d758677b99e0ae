#pragma once

#include <vector>

#include "ilseval/dtree/tree.hpp"

namespace ilseval::dtree {

/// Gini gains closer than this are treated as ties.
inline constexpr double kGainTieTolerance = 1e-12;

double gini(const std::map<std::string, std::size_t>& counts, std::size_t total);

/// Grows a CART-style tree to purity. Ties between candidate splits go to
/// the earlier schema factor, then the smaller threshold or category value.
/// Throws EmptyInput for no records and ValidationError for records that do
/// not conform to the schema.
DecisionTree learn_tree(const std::vector<LabeledRecord>& records, const FactorSchema& schema);

}  // namespace ilseval::dtree
