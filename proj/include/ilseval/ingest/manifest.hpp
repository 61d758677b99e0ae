#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ilseval/core/model.hpp"

namespace ilseval::ingest {

inline constexpr int kDefaultRepetitions = 3;

struct ExperimentRef {
  std::string estimate;   // path, resolved against the manifest directory
  std::string reference;  // path, resolved against the manifest directory
  std::vector<double> evaluation_times;
  std::string evaluation_times_path;  // set instead of evaluation_times when given as a CSV path
  double time_offset{0.0};            // added to estimate timestamps
};

struct ScenarioEntry {
  Scenario scenario;
  std::vector<ExperimentRef> experiments;
};

/// Experiment whose synced pairs fit the estimate-to-reference frame transform.
struct AlignmentSpec {
  std::string scenario_id;
  int repetition{1};
  bool with_scale{false};
};

struct Manifest {
  StudySchema schema;
  std::vector<ScenarioEntry> scenarios;
  std::optional<PerformanceClassScheme> performance_classes;
  int repetitions{kDefaultRepetitions};
  std::optional<AlignmentSpec> alignment;

  std::vector<Scenario> scenario_list() const;
  const ScenarioEntry* find(std::string_view scenario_id) const noexcept;
};

/// Structural problems throw Error(SchemaError) naming the JSON path;
/// semantic ones throw the ValidationError from validate_manifest.
Manifest parse_scenario_manifest(const std::string& path);
Manifest parse_manifest_json(const nlohmann::json& doc, const std::string& base_dir);

/// Loads the trajectories of one experiment and applies its time offset.
ExperimentRecord load_experiment(const ExperimentRef& ref, const std::string& scenario_id, int repetition);

nlohmann::json schema_to_json(const StudySchema& schema);
StudySchema schema_from_json(const nlohmann::json& j, const std::string& where = "$.schema");
nlohmann::json scheme_to_json(const PerformanceClassScheme& scheme);
PerformanceClassScheme scheme_from_json(const nlohmann::json& j, const std::string& where = "$.performance_classes");
nlohmann::json assignment_to_json(const Assignment& a);
Assignment assignment_from_json(const nlohmann::json& j, const std::string& where);

/// Paths are written as given (relative paths stay relative to the manifest).
nlohmann::json manifest_to_json(const Manifest& manifest);

/// JSON text with two-space indent and a trailing LF.
std::string dump_json(const nlohmann::json& j);

}  // namespace ilseval::ingest
