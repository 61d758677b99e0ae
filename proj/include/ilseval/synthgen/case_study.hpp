#pragma once

// Warehouse case study: a UWB and a LiDAR system joined by the ILS factor,
// 8 + 32 scenarios, application classes A-D and cluster classes I-V.

#include <map>
#include <string>

#include "ilseval/dtree/tree.hpp"
#include "ilseval/synthgen/synthgen.hpp"

namespace ilseval::synthgen::case_study {

StudySchema schema();

PerformanceClassScheme application_scheme();
PerformanceClassScheme technology_scheme();

dtree::TreeSpec application_tree_spec();
dtree::TreeSpec technology_tree_spec();
dtree::DecisionTree application_tree();
dtree::DecisionTree technology_tree();

/// Sub-intervals of the application classes used for fixture h95 values.
std::map<std::string, ClassRange> application_ranges();
std::map<std::string, ClassRange> technology_ranges();

/// Target h95 ranges for simulated experiments, narrow enough that the
/// 3-repetition mean stays well inside each class.
std::map<std::string, ClassRange> simulation_targets();

/// 40 scenarios x 3 repetitions, 33 evaluation poses, application tree.
SimulationPlan default_plan();

}  // namespace ilseval::synthgen::case_study
