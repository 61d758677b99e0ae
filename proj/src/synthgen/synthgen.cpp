#include "ilseval/synthgen/synthgen.hpp"

#include <cmath>
#include <filesystem>
#include <random>

#include "ilseval/dtree/render.hpp"
#include "ilseval/ingest/trajectory_csv.hpp"
#include "ilseval/synthgen/case_study.hpp"
#include "ilseval/util/text.hpp"

namespace ilseval::synthgen {

using nlohmann::json;
namespace fs = std::filesystem;

double rayleigh_h95_factor() {
  static const double factor = std::sqrt(-2.0 * std::log(0.05));
  return factor;
}

void NoiseSpec::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(sigma_xy) || sigma_xy < 0.0) throw Error(Errc::InvalidPlan, "sigma_xy must be finite and >= 0");
  if (!finite(bias[0]) || !finite(bias[1])) throw Error(Errc::InvalidPlan, "bias must be finite");
  if (!finite(outlier_rate) || outlier_rate < 0.0 || outlier_rate >= 1.0) {
    throw Error(Errc::InvalidPlan, "outlier_rate must lie in [0, 1)");
  }
  if (!finite(outlier_scale) || outlier_scale < 0.0) throw Error(Errc::InvalidPlan, "outlier_scale must be >= 0");
}

std::vector<Waypoint> default_path() {
  return {{0.0, 0.0}, {6.0, 0.0}, {6.0, 3.0}, {0.0, 3.0}, {0.0, 0.0}, {-6.0, 0.0}, {-6.0, 3.0}, {0.0, 3.0}};
}

PathSpec default_path_spec() {
  PathSpec p;
  p.waypoints = default_path();
  return p;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Quaternion yaw_quaternion(double yaw) { return {std::cos(yaw / 2.0), 0.0, 0.0, std::sin(yaw / 2.0)}; }

}  // namespace

ExperimentRecord generate_experiment(const PlantedScenario& plan, const PathSpec& path, std::uint64_t seed,
                                     int repetition) {
  plan.noise.validate();
  if (path.waypoints.size() < 2) throw Error(Errc::InvalidPlan, "path needs at least 2 waypoints");
  if (!(path.speed > 0.0) || !std::isfinite(path.speed)) throw Error(Errc::InvalidPlan, "speed must be > 0");
  if (!(path.rate > 0.0) || !std::isfinite(path.rate)) throw Error(Errc::InvalidPlan, "rate must be > 0");
  if (path.evaluation_count < 1) throw Error(Errc::InvalidPlan, "evaluation_count must be >= 1");

  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    const double dx = path.waypoints[i][0] - path.waypoints[i - 1][0];
    const double dy = path.waypoints[i][1] - path.waypoints[i - 1][1];
    cumulative.push_back(cumulative.back() + std::hypot(dx, dy));
  }
  const double length = cumulative.back();
  if (!(length > 0.0)) throw Error(Errc::InvalidPlan, "path has zero length");
  const double duration = length / path.speed;
  const auto samples = static_cast<std::size_t>(std::floor(duration * path.rate + 1e-9)) + 1;
  if (samples < path.evaluation_count) {
    throw Error(Errc::InvalidPlan, "path yields " + std::to_string(samples) + " samples, fewer than " +
                                       std::to_string(path.evaluation_count) + " evaluation poses");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Pose> ref, est;
  ref.reserve(samples);
  est.reserve(samples);
  std::size_t seg = 1;
  for (std::size_t i = 0; i < samples; ++i) {
    const double tau = static_cast<double>(i) / path.rate;
    const double s = std::min(path.speed * tau, length);
    while (seg + 1 < cumulative.size() && s >= cumulative[seg]) ++seg;
    const auto& a = path.waypoints[seg - 1];
    const auto& b = path.waypoints[seg];
    const double span = cumulative[seg] - cumulative[seg - 1];
    const double f = span > 0.0 ? (s - cumulative[seg - 1]) / span : 0.0;
    Pose p;
    p.t = path.start_time + tau;
    p.x = a[0] + f * (b[0] - a[0]);
    p.y = a[1] + f * (b[1] - a[1]);
    p.z = path.height;
    p.orientation = yaw_quaternion(std::atan2(b[1] - a[1], b[0] - a[0]));
    ref.push_back(p);

    double ex = plan.noise.bias[0] + plan.noise.sigma_xy * gauss(rng);
    double ey = plan.noise.bias[1] + plan.noise.sigma_xy * gauss(rng);
    if (plan.noise.outlier_rate > 0.0 && unit_uniform(rng) < plan.noise.outlier_rate) {
      const double r = plan.noise.outlier_scale * std::sqrt(unit_uniform(rng));
      const double th = 2.0 * M_PI * unit_uniform(rng);
      ex += r * std::cos(th);
      ey += r * std::sin(th);
    }
    Pose q = p;
    q.x += ex;
    q.y += ey;
    est.push_back(q);
  }

  ExperimentRecord rec;
  rec.scenario_id = plan.scenario.id;
  rec.repetition = repetition;
  const std::size_t n = path.evaluation_count;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t idx = n == 1 ? 0 : (j * (samples - 1) + (n - 1) / 2) / (n - 1);
    rec.evaluation_times.push_back(ref[idx].t);
  }
  rec.reference = Trajectory(plan.scenario.id + "/reference", std::move(ref));
  rec.estimate = Trajectory(plan.scenario.id + "/estimate", std::move(est));
  return rec;
}

std::vector<PlantedRecord> plant_labeled_dataset(const dtree::DecisionTree& tree, const StudySchema& schema,
                                                 const std::map<std::string, ClassRange>& ranges, std::uint64_t seed,
                                                 const PerformanceClassScheme* scheme) {
  for (const auto& [label, r] : ranges) {
    if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || r.lower < 0.0 || r.lower > r.upper) {
      throw Error(Errc::InfeasibleRange, "range for class " + label + " must satisfy 0 <= lower <= upper");
    }
    if (scheme != nullptr) {
      auto iv = scheme->interval(label);
      if (!iv) throw Error(Errc::InfeasibleRange, "class " + label + " is not part of the scheme");
      if (r.lower < iv->first || !(r.upper < iv->second)) {
        throw Error(Errc::InfeasibleRange, "range [" + text::format_double(r.lower) + ", " +
                                               text::format_double(r.upper) + "] leaves class " + label);
      }
    }
  }
  const std::vector<Assignment> rows = full_factorial(schema);
  const int width = std::max<int>(2, static_cast<int>(std::to_string(rows.size()).size()));
  std::vector<PlantedRecord> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    PlantedRecord rec;
    std::string num = std::to_string(i + 1);
    rec.scenario.id = "S" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;
    rec.scenario.assignment = rows[i];
    rec.label = dtree::predict(tree, rows[i]).label;
    auto it = ranges.find(rec.label);
    if (it == ranges.end()) throw Error(Errc::InfeasibleRange, "no h95 range for class " + rec.label);
    std::mt19937_64 rng(derive_seed(seed, i + 1, 0));
    rec.h95 = it->second.lower + unit_uniform(rng) * (it->second.upper - it->second.lower);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<dtree::LabeledRecord> to_labeled_records(const std::vector<PlantedRecord>& planted) {
  std::vector<dtree::LabeledRecord> out;
  out.reserve(planted.size());
  for (const auto& p : planted) out.push_back({p.scenario.id, p.scenario.assignment, p.label});
  return out;
}

namespace {

[[noreturn]] void plan_fail(const std::string& where, const std::string& what) {
  throw Error(Errc::InvalidPlan, where + ": " + what);
}

double plan_number(const json& j, const std::string& where) {
  if (!j.is_number()) plan_fail(where, "expected a number");
  return j.get<double>();
}

std::array<double, 2> plan_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) plan_fail(where, "expected [a, b]");
  return {plan_number(j[0], where + "[0]"), plan_number(j[1], where + "[1]")};
}

}  // namespace

SimulationPlan plan_from_json(const json& doc) {
  if (!doc.is_object()) plan_fail("$", "expected an object");
  SimulationPlan plan = case_study::default_plan();
  bool technology = false;
  if (doc.contains("schema")) plan.schema = ingest::schema_from_json(doc["schema"], "$.schema");
  if (doc.contains("tree")) {
    const json& t = doc["tree"];
    if (t.is_string()) {
      const std::string name = t.get<std::string>();
      if (name == "application") {
        plan.tree = case_study::application_tree();
      } else if (name == "technology") {
        plan.tree = case_study::technology_tree();
        plan.scheme = case_study::technology_scheme();
        plan.targets = case_study::technology_ranges();
        technology = true;
      } else {
        plan_fail("$.tree", "expected 'application', 'technology' or a tree document");
      }
    } else {
      plan.tree = dtree::tree_from_json(t);
    }
  }
  if (doc.contains("scheme")) {
    const json& s = doc["scheme"];
    if (s.is_string()) {
      const std::string name = s.get<std::string>();
      if (name == "application") plan.scheme = case_study::application_scheme();
      else if (name == "technology") plan.scheme = case_study::technology_scheme();
      else plan_fail("$.scheme", "expected 'application', 'technology' or a scheme object");
    } else {
      plan.scheme = ingest::scheme_from_json(s, "$.scheme");
    }
  }
  if (doc.contains("targets")) {
    const json& t = doc["targets"];
    if (!t.is_object()) plan_fail("$.targets", "expected an object of [lower, upper] pairs");
    plan.targets.clear();
    for (auto it = t.begin(); it != t.end(); ++it) {
      auto p = plan_pair(*it, "$.targets." + it.key());
      plan.targets[it.key()] = ClassRange{p[0], p[1]};
    }
  } else if (!technology && doc.contains("tree") && !doc["tree"].is_string()) {
    plan_fail("$.targets", "a custom tree needs explicit targets");
  }
  if (doc.contains("repetitions")) {
    const json& r = doc["repetitions"];
    if (!r.is_number_integer() || r.get<int>() < 1) plan_fail("$.repetitions", "expected a positive integer");
    plan.repetitions = r.get<int>();
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned()) plan_fail("$.seed", "expected a non-negative integer");
    plan.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("path")) {
    const json& p = doc["path"];
    if (!p.is_object()) plan_fail("$.path", "expected an object");
    if (p.contains("waypoints")) {
      const json& w = p["waypoints"];
      if (!w.is_array()) plan_fail("$.path.waypoints", "expected an array");
      plan.path.waypoints.clear();
      for (std::size_t i = 0; i < w.size(); ++i) {
        plan.path.waypoints.push_back(plan_pair(w[i], "$.path.waypoints[" + std::to_string(i) + "]"));
      }
    }
    if (p.contains("speed")) plan.path.speed = plan_number(p["speed"], "$.path.speed");
    if (p.contains("rate")) plan.path.rate = plan_number(p["rate"], "$.path.rate");
    if (p.contains("height")) plan.path.height = plan_number(p["height"], "$.path.height");
    if (p.contains("start_time")) plan.path.start_time = plan_number(p["start_time"], "$.path.start_time");
    if (p.contains("evaluation_count")) {
      if (!p["evaluation_count"].is_number_unsigned()) plan_fail("$.path.evaluation_count", "expected a positive integer");
      plan.path.evaluation_count = p["evaluation_count"].get<std::size_t>();
    }
  }
  if (doc.contains("noise")) {
    const json& n = doc["noise"];
    if (!n.is_object()) plan_fail("$.noise", "expected an object");
    if (n.contains("bias")) plan.noise.bias = plan_pair(n["bias"], "$.noise.bias");
    if (n.contains("outlier_rate")) plan.noise.outlier_rate = plan_number(n["outlier_rate"], "$.noise.outlier_rate");
    if (n.contains("outlier_scale")) plan.noise.outlier_scale = plan_number(n["outlier_scale"], "$.noise.outlier_scale");
    plan.noise.validate();
  }
  if (doc.contains("estimate_frame")) {
    plan.estimate_frame = align::transform_from_json(doc["estimate_frame"]);
  }
  return plan;
}

SimulationPlan load_plan_file(const std::string& path) {
  const std::string contents = text::read_file(path);
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidPlan, path + ": " + e.what());
  }
  return plan_from_json(doc);
}

json plan_to_json(const SimulationPlan& plan) {
  json j;
  j["schema"] = ingest::schema_to_json(plan.schema);
  j["scheme"] = ingest::scheme_to_json(plan.scheme);
  j["tree"] = dtree::tree_to_json(plan.tree);
  j["targets"] = json::object();
  for (const auto& [label, r] : plan.targets) j["targets"][label] = {r.lower, r.upper};
  j["repetitions"] = plan.repetitions;
  j["seed"] = plan.seed;
  json path;
  path["waypoints"] = json::array();
  for (const auto& w : plan.path.waypoints) path["waypoints"].push_back({w[0], w[1]});
  path["speed"] = plan.path.speed;
  path["rate"] = plan.path.rate;
  path["height"] = plan.path.height;
  path["start_time"] = plan.path.start_time;
  path["evaluation_count"] = plan.path.evaluation_count;
  j["path"] = std::move(path);
  j["noise"] = {{"bias", {plan.noise.bias[0], plan.noise.bias[1]}},
                {"outlier_rate", plan.noise.outlier_rate},
                {"outlier_scale", plan.noise.outlier_scale}};
  if (plan.estimate_frame) j["estimate_frame"] = align::transform_to_json(*plan.estimate_frame);
  return j;
}

SimulatedDataset write_dataset(const SimulationPlan& plan, const std::string& out_dir) {
  SimulatedDataset ds;
  ds.planted = plant_labeled_dataset(plan.tree, plan.schema, plan.targets, plan.seed, &plan.scheme);
  if (plan.repetitions < 1) throw Error(Errc::InvalidPlan, "repetitions must be >= 1");
  std::optional<align::RigidTransform> to_estimate;
  if (plan.estimate_frame) {
    align::check_transform(*plan.estimate_frame);
    to_estimate = plan.estimate_frame->inverse();
  }

  std::vector<ExperimentRecord> experiments;
  ds.manifest.schema = plan.schema;
  ds.manifest.performance_classes = plan.scheme;
  ds.manifest.repetitions = plan.repetitions;
  for (std::size_t i = 0; i < ds.planted.size(); ++i) {
    const PlantedRecord& rec = ds.planted[i];
    ingest::ScenarioEntry entry;
    entry.scenario = rec.scenario;
    PlantedScenario ps{rec.scenario, plan.noise, rec.h95};
    ps.noise.sigma_xy = sigma_for_h95(rec.h95);
    for (int r = 1; r <= plan.repetitions; ++r) {
      ExperimentRecord exp = generate_experiment(ps, plan.path, derive_seed(plan.seed, i + 1, static_cast<std::uint64_t>(r)), r);
      if (to_estimate) exp.estimate = align::apply_transform(*to_estimate, exp.estimate);
      const std::string stem = "trajectories/" + rec.scenario.id + "_r" + std::to_string(r);
      ingest::ExperimentRef ref;
      ref.estimate = stem + "_estimate.csv";
      ref.reference = stem + "_reference.csv";
      ref.evaluation_times = exp.evaluation_times;
      entry.experiments.push_back(ref);
      experiments.push_back(std::move(exp));
    }
    ds.manifest.scenarios.push_back(std::move(entry));
  }
  if (plan.estimate_frame && !ds.manifest.scenarios.empty()) {
    ds.manifest.alignment = ingest::AlignmentSpec{ds.manifest.scenarios.front().scenario.id, 1, false};
  }

  const fs::path root(out_dir);
  fs::create_directories(root / "trajectories");
  std::size_t k = 0;
  for (const auto& entry : ds.manifest.scenarios) {
    for (const auto& ref : entry.experiments) {
      ingest::write_trajectory_csv(experiments[k].estimate, (root / ref.estimate).string());
      ingest::write_trajectory_csv(experiments[k].reference, (root / ref.reference).string());
      ++k;
    }
  }
  text::write_file((root / "manifest.json").string(), ingest::dump_json(ingest::manifest_to_json(ds.manifest)));
  std::string planted = "scenario_id,label,target_h95\n";
  for (const auto& p : ds.planted) planted += p.scenario.id + "," + p.label + "," + text::format_double(p.h95) + "\n";
  text::write_file((root / "planted.csv").string(), planted);
  text::write_file((root / "planted_tree.json").string(), dtree::render(plan.tree, dtree::RenderFormat::Json));
  text::write_file((root / "plan.json").string(), ingest::dump_json(plan_to_json(plan)));
  return ds;
}

}  // namespace ilseval::synthgen
