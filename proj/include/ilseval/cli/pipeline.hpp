#pragma once

// In-process stages behind the CLI subcommands, plus the CSV/JSON hand-off
// formats between them.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ilseval/align/transform.hpp"
#include "ilseval/categorize/categorize.hpp"
#include "ilseval/dtree/tree.hpp"
#include "ilseval/ingest/manifest.hpp"
#include "ilseval/metrics/metrics.hpp"

namespace ilseval::pipeline {

struct ScenarioReport {
  std::string scenario_id;
  int repetitions{0};
  double metric_q{metrics::kH95Quantile};
  double mean_metric{0.0};  // mean over repetitions of the q-percentile
  double mean_h95{0.0};
  double mean_median{0.0};
};

struct RepeatabilityRow {
  std::string scenario_id;
  int repetitions{0};
  double max_ks{0.0};
};

struct CalibrationResult {
  align::RigidTransform transform;
  double rmse{0.0};
  std::size_t pairs{0};
};

struct EvaluationResult {
  std::vector<metrics::ExperimentSummary> experiments;
  std::vector<ScenarioReport> scenarios;
  std::vector<RepeatabilityRow> repeatability;  // scenarios with >= 2 repetitions
  std::vector<std::pair<std::string, metrics::CdfCurve>> cdfs;  // "<id>_r<rep>"
  std::optional<CalibrationResult> calibration;
  std::vector<std::string> warnings;
};

/// Fits the estimate-to-reference transform on the manifest's calibration
/// experiment, then computes per-experiment and per-scenario metrics.
EvaluationResult evaluate(const ingest::Manifest& manifest, double q = metrics::kH95Quantile,
                          double max_gap = ingest::kDefaultMaxGap);
void write_evaluation(const EvaluationResult& result, const std::string& out_dir);

std::vector<ScenarioReport> read_scenario_report(const std::string& path);

/// ScenarioMetrics whose mean_h95 carries each report's mean_metric.
std::vector<ScenarioMetrics> to_scenario_metrics(const std::vector<ScenarioReport>& reports);

struct Categorization {
  PerformanceClassScheme scheme;
  std::vector<ScenarioMetrics> labeled;
  std::optional<categorize::ClusteringResult> clusters;
  std::vector<double> sse;  // SSE(k), k = 1..k_max, technology only
};

Categorization categorize_application(const std::vector<ScenarioMetrics>& metrics, const PerformanceClassScheme& scheme);
/// Elbow-selected k over the scenario values with k_max capped at n - 1.
Categorization categorize_technology(const std::vector<ScenarioMetrics>& metrics, int k_max = categorize::kDefaultKMax);
void write_categorizations(const std::vector<Categorization>& results, const std::string& out_dir);

struct CategoryRow {
  std::string scenario_id;
  double value{0.0};
  std::string label;
  SchemeKind kind{SchemeKind::Application};
};

std::vector<CategoryRow> read_categories(const std::string& path);

/// Joins class labels of one scheme with the manifest's scenario assignments.
/// Unknown scenario ids throw InvalidArgument.
std::vector<dtree::LabeledRecord> labeled_records(const ingest::Manifest& manifest, const std::vector<CategoryRow>& rows,
                                                  SchemeKind kind);

nlohmann::json relevance_report(const dtree::DecisionTree& tree, SchemeKind kind);
void write_tree_artifacts(const dtree::DecisionTree& tree, SchemeKind kind, const std::string& out_dir);

/// Characters that cannot appear in a scenario id used in CSV reports.
bool csv_safe(const std::string& field);

}  // namespace ilseval::pipeline
