#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ilseval/align/transform.hpp"
#include "ilseval/core/model.hpp"
#include "ilseval/dtree/tree.hpp"
#include "ilseval/ingest/manifest.hpp"

namespace ilseval::synthgen {

/// sqrt(-2 ln 0.05): the 95th percentile of a unit Rayleigh distribution.
double rayleigh_h95_factor();
inline double rayleigh_h95(double sigma) { return sigma * rayleigh_h95_factor(); }
inline double sigma_for_h95(double h95) { return h95 / rayleigh_h95_factor(); }

struct NoiseSpec {
  double sigma_xy{0.0};
  std::array<double, 2> bias{0.0, 0.0};
  double outlier_rate{0.0};   // fraction of samples receiving an extra disc offset
  double outlier_scale{0.0};  // disc radius in meters

  /// Throws InvalidPlan on negative sigma or an outlier rate outside [0, 1).
  void validate() const;
};

struct PlantedScenario {
  Scenario scenario;
  NoiseSpec noise;
  double target_h95{0.0};
};

using Waypoint = std::array<double, 2>;

struct PathSpec {
  std::vector<Waypoint> waypoints;
  double speed{0.3};  // m/s
  double rate{10.0};  // Hz
  double height{0.0};
  std::size_t evaluation_count{33};
  double start_time{0.0};
};

/// Two 6 m x 3 m rectangles sharing one side; 33 m long.
std::vector<Waypoint> default_path();
PathSpec default_path_spec();

/// Constant-speed reference with yaw along the direction of travel and an
/// estimate displaced by the noise model. Evaluation times coincide with
/// sample timestamps and are spread evenly over the traversal.
/// Throws InvalidPlan on fewer than 2 waypoints, non-positive speed or rate,
/// a zero-length path or fewer samples than evaluation poses.
ExperimentRecord generate_experiment(const PlantedScenario& plan, const PathSpec& path, std::uint64_t seed,
                                     int repetition = 1);

/// Mixes a base seed with stream indices (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Closed interval of h95 values a planted class draws from.
struct ClassRange {
  double lower{0.0};
  double upper{0.0};
};

struct PlantedRecord {
  Scenario scenario;
  std::string label;
  double h95{0.0};
};

/// Enumerates the full factorial of the schema, labels each scenario by
/// routing it through the tree and draws an h95 value inside the label's
/// range. With a scheme, each range must also sit inside the label's class
/// interval. Throws InfeasibleRange otherwise.
std::vector<PlantedRecord> plant_labeled_dataset(const dtree::DecisionTree& tree, const StudySchema& schema,
                                                 const std::map<std::string, ClassRange>& ranges, std::uint64_t seed,
                                                 const PerformanceClassScheme* scheme = nullptr);

std::vector<dtree::LabeledRecord> to_labeled_records(const std::vector<PlantedRecord>& planted);

struct SimulationPlan {
  StudySchema schema;
  PerformanceClassScheme scheme;
  dtree::DecisionTree tree;
  std::map<std::string, ClassRange> targets;
  int repetitions{3};
  PathSpec path;
  NoiseSpec noise;  // sigma_xy is derived per scenario from its target h95
  std::uint64_t seed{1};
  /// Maps estimate-frame coordinates to the reference frame; estimates are
  /// written in the estimate frame and the manifest requests alignment.
  std::optional<align::RigidTransform> estimate_frame;
};

/// Missing fields fall back to the case-study defaults. Throws
/// Error(InvalidPlan) or Error(SchemaError) on malformed plans.
SimulationPlan plan_from_json(const nlohmann::json& doc);
SimulationPlan load_plan_file(const std::string& path);
nlohmann::json plan_to_json(const SimulationPlan& plan);

struct SimulatedDataset {
  ingest::Manifest manifest;  // experiment paths relative to the output directory
  std::vector<PlantedRecord> planted;
};

/// Writes manifest.json, trajectories/, planted.csv, planted_tree.json and
/// plan.json under out_dir.
SimulatedDataset write_dataset(const SimulationPlan& plan, const std::string& out_dir);

}  // namespace ilseval::synthgen
