#include "ilseval/synthgen/case_study.hpp"

namespace ilseval::synthgen::case_study {

using dtree::TreeSpec;

StudySchema schema() {
  std::vector<Factor> factors{
      {"ILS", CategoricalDomain{{"UWB", "LiDAR"}}},
      {"Environment", CategoricalDomain{{"empty", "aisle"}}},
      {"EKF", CategoricalDomain{{"on", "off"}}},
      {"MapQuality", ContinuousDomain{"", 0.0, 1.0, {0.54, 0.81, 0.84, 0.99}}},
      {"FoV", ContinuousDomain{"deg", 0.0, 360.0, {180.0, 270.0}}},
      {"Reflector", CategoricalDomain{{"on", "off"}}},
      {"Dynamics", CategoricalDomain{{"yes", "no"}}},
  };
  return StudySchema(FactorSchema(std::move(factors)), "ILS",
                     {{"UWB", {"Environment", "EKF", "Dynamics"}},
                      {"LiDAR", {"MapQuality", "FoV", "Reflector", "Dynamics"}}});
}

PerformanceClassScheme application_scheme() {
  return PerformanceClassScheme(SchemeKind::Application,
                                {{"A", 0.0, 0.05}, {"B", 0.05, 0.1}, {"C", 0.1, 0.5}, {"D", 0.5, 1.0}},
                                "unclassified");
}

PerformanceClassScheme technology_scheme() {
  return PerformanceClassScheme(SchemeKind::Technology,
                                {{"I", 0.0, 0.056}, {"II", 0.056, 0.209}, {"III", 0.209, 0.394}, {"IV", 0.394, 0.493}},
                                "V");
}

TreeSpec application_tree_spec() {
  TreeSpec uwb = TreeSpec::node("Environment", "empty", TreeSpec::leaf("C"),
                                TreeSpec::node("EKF", "on", TreeSpec::leaf("C"), TreeSpec::leaf("D")));
  TreeSpec low_map = TreeSpec::node(
      "FoV", 225.0, TreeSpec::leaf("B"),
      TreeSpec::node("Reflector", "off", TreeSpec::leaf("B"),
                     TreeSpec::node("Dynamics", "yes", TreeSpec::leaf("B"), TreeSpec::leaf("A"))));
  TreeSpec high_map = TreeSpec::node(
      "FoV", 225.0,
      TreeSpec::node("Reflector", "on", TreeSpec::leaf("A"),
                     TreeSpec::node("MapQuality", 0.914, TreeSpec::leaf("B"), TreeSpec::leaf("A"))),
      TreeSpec::leaf("A"));
  return TreeSpec::node("ILS", "UWB", std::move(uwb), TreeSpec::node("MapQuality", 0.676, std::move(low_map), std::move(high_map)));
}

TreeSpec technology_tree_spec() {
  TreeSpec empty = TreeSpec::node("EKF", "on", TreeSpec::leaf("III"),
                                  TreeSpec::node("Dynamics", "no", TreeSpec::leaf("III"), TreeSpec::leaf("IV")));
  TreeSpec aisle = TreeSpec::node("EKF", "off", TreeSpec::leaf("V"),
                                  TreeSpec::node("Dynamics", "no", TreeSpec::leaf("III"), TreeSpec::leaf("IV")));
  TreeSpec uwb = TreeSpec::node("Environment", "empty", std::move(empty), std::move(aisle));
  TreeSpec low_map = TreeSpec::node("FoV", 225.0, TreeSpec::leaf("II"),
                                    TreeSpec::node("Reflector", "off", TreeSpec::leaf("II"), TreeSpec::leaf("I")));
  TreeSpec high_map = TreeSpec::node(
      "FoV", 225.0,
      TreeSpec::node("Reflector", "on", TreeSpec::leaf("I"),
                     TreeSpec::node("MapQuality", 0.914, TreeSpec::leaf("II"), TreeSpec::leaf("I"))),
      TreeSpec::leaf("I"));
  return TreeSpec::node("ILS", "UWB", std::move(uwb), TreeSpec::node("MapQuality", 0.676, std::move(low_map), std::move(high_map)));
}

dtree::DecisionTree application_tree() { return dtree::make_tree(schema().factors(), application_tree_spec()); }
dtree::DecisionTree technology_tree() { return dtree::make_tree(schema().factors(), technology_tree_spec()); }

std::map<std::string, ClassRange> application_ranges() {
  return {{"A", {0.01, 0.045}}, {"B", {0.055, 0.095}}, {"C", {0.15, 0.45}}, {"D", {0.55, 0.95}}};
}

std::map<std::string, ClassRange> technology_ranges() {
  return {{"I", {0.01, 0.05}}, {"II", {0.07, 0.2}}, {"III", {0.22, 0.38}}, {"IV", {0.4, 0.48}}, {"V", {0.55, 0.95}}};
}

std::map<std::string, ClassRange> simulation_targets() {
  return {{"A", {0.02, 0.03}}, {"B", {0.072, 0.078}}, {"C", {0.25, 0.35}}, {"D", {0.72, 0.78}}};
}

SimulationPlan default_plan() {
  SimulationPlan plan;
  plan.schema = schema();
  plan.scheme = application_scheme();
  plan.tree = application_tree();
  plan.targets = simulation_targets();
  plan.repetitions = 3;
  plan.path = default_path_spec();
  plan.seed = 1;
  return plan;
}

}  // namespace ilseval::synthgen::case_study
