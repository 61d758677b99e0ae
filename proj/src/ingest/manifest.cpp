#include "ilseval/ingest/manifest.hpp"

#include <filesystem>

#include "ilseval/ingest/trajectory_csv.hpp"
#include "ilseval/util/text.hpp"

namespace ilseval::ingest {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::SchemaError, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_at(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::vector<double> numbers_at(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> strings_at(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string_at(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path.string();
  return (fs::path(base_dir) / path).lexically_normal().string();
}

Factor factor_from_json(const json& j, const std::string& where) {
  Factor f;
  f.name = string_at(field(j, "name", where), where + ".name");
  const std::string kind = string_at(field(j, "kind", where), where + ".kind");
  if (kind == "categorical") {
    f.domain = CategoricalDomain{strings_at(field(j, "values", where), where + ".values")};
  } else if (kind == "continuous") {
    ContinuousDomain d;
    d.min = number_at(field(j, "min", where), where + ".min");
    d.max = number_at(field(j, "max", where), where + ".max");
    if (j.contains("unit")) d.unit = string_at(j["unit"], where + ".unit");
    if (j.contains("levels")) d.levels = numbers_at(j["levels"], where + ".levels");
    f.domain = std::move(d);
  } else {
    fail(where + ".kind", "expected 'categorical' or 'continuous'");
  }
  return f;
}

json factor_to_json(const Factor& f) {
  json j;
  j["name"] = f.name;
  if (f.categorical()) {
    j["kind"] = "categorical";
    j["values"] = f.categories().values;
  } else {
    const auto& r = f.range();
    j["kind"] = "continuous";
    j["unit"] = r.unit;
    j["min"] = r.min;
    j["max"] = r.max;
    if (!r.levels.empty()) j["levels"] = r.levels;
  }
  return j;
}

ExperimentRef experiment_from_json(const json& j, const std::string& where, const std::string& base_dir) {
  ExperimentRef e;
  e.estimate = resolve(base_dir, string_at(field(j, "estimate", where), where + ".estimate"));
  e.reference = resolve(base_dir, string_at(field(j, "reference", where), where + ".reference"));
  const json& times = field(j, "evaluation_times", where);
  if (times.is_string()) {
    e.evaluation_times_path = resolve(base_dir, times.get<std::string>());
  } else {
    e.evaluation_times = numbers_at(times, where + ".evaluation_times");
    if (!std::is_sorted(e.evaluation_times.begin(), e.evaluation_times.end()))
      fail(where + ".evaluation_times", "evaluation times must be sorted");
  }
  if (j.contains("time_offset")) e.time_offset = number_at(j["time_offset"], where + ".time_offset");
  return e;
}

}  // namespace

std::vector<Scenario> Manifest::scenario_list() const {
  std::vector<Scenario> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(s.scenario);
  return out;
}

const ScenarioEntry* Manifest::find(std::string_view scenario_id) const noexcept {
  for (const auto& s : scenarios)
    if (s.scenario.id == scenario_id) return &s;
  return nullptr;
}

StudySchema schema_from_json(const json& j, const std::string& where) {
  const json& list = field(j, "factors", where);
  if (!list.is_array()) fail(where + ".factors", "expected an array");
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < list.size(); ++i)
    factors.push_back(factor_from_json(list[i], where + ".factors[" + std::to_string(i) + "]"));
  FactorSchema schema(std::move(factors));
  if (!j.contains("join_factor")) {
    if (j.contains("systems")) fail(where + ".systems", "systems require a join_factor");
    return StudySchema(std::move(schema));
  }
  std::string join = string_at(j["join_factor"], where + ".join_factor");
  const json& systems = field(j, "systems", where);
  if (!systems.is_array()) fail(where + ".systems", "expected an array");
  std::vector<std::pair<std::string, std::vector<std::string>>> parts;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const std::string w = where + ".systems[" + std::to_string(i) + "]";
    parts.emplace_back(string_at(field(systems[i], "name", w), w + ".name"),
                       strings_at(field(systems[i], "factors", w), w + ".factors"));
  }
  return StudySchema(std::move(schema), std::move(join), std::move(parts));
}

json schema_to_json(const StudySchema& schema) {
  json j;
  j["factors"] = json::array();
  for (const auto& f : schema.factors().factors()) j["factors"].push_back(factor_to_json(f));
  if (schema.joined()) {
    j["join_factor"] = schema.join_factor();
    j["systems"] = json::array();
    for (const auto& [name, factors] : schema.systems()) j["systems"].push_back({{"name", name}, {"factors", factors}});
  }
  return j;
}

PerformanceClassScheme scheme_from_json(const json& j, const std::string& where) {
  SchemeKind kind = SchemeKind::Application;
  if (j.contains("kind")) {
    const std::string k = string_at(j["kind"], where + ".kind");
    if (k != "application" && k != "technology") fail(where + ".kind", "expected 'application' or 'technology'");
    kind = parse_scheme_kind(k);
  }
  const json& list = field(j, "classes", where);
  if (!list.is_array()) fail(where + ".classes", "expected an array");
  std::vector<PerformanceClass> classes;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string w = where + ".classes[" + std::to_string(i) + "]";
    classes.push_back({string_at(field(list[i], "label", w), w + ".label"),
                       number_at(field(list[i], "lower", w), w + ".lower"),
                       number_at(field(list[i], "upper", w), w + ".upper")});
  }
  std::string overflow = "unclassified";
  if (j.contains("overflow_label")) overflow = string_at(j["overflow_label"], where + ".overflow_label");
  return PerformanceClassScheme(kind, std::move(classes), std::move(overflow));
}

json scheme_to_json(const PerformanceClassScheme& scheme) {
  json j;
  j["kind"] = std::string(to_string(scheme.kind()));
  j["classes"] = json::array();
  for (const auto& c : scheme.classes()) j["classes"].push_back({{"label", c.label}, {"lower", c.lower}, {"upper", c.upper}});
  j["overflow_label"] = scheme.overflow_label();
  return j;
}

Assignment assignment_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  Assignment a;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) a[key] = value.get<std::string>();
    else if (value.is_number()) a[key] = value.get<double>();
    else fail(where + "." + key, "expected a string or a number");
  }
  return a;
}

json assignment_to_json(const Assignment& a) {
  json j = json::object();
  for (const auto& [key, value] : a) {
    if (const auto* s = std::get_if<std::string>(&value)) j[key] = *s;
    else j[key] = std::get<double>(value);
  }
  return j;
}

Manifest parse_manifest_json(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) fail("$", "expected an object");
  Manifest m;
  m.schema = schema_from_json(field(doc, "schema", "$"));
  if (doc.contains("performance_classes") && !doc["performance_classes"].is_null())
    m.performance_classes = scheme_from_json(doc["performance_classes"]);
  if (doc.contains("repetitions")) {
    const json& r = doc["repetitions"];
    if (!r.is_number_integer() || r.get<int>() < 1) fail("$.repetitions", "expected a positive integer");
    m.repetitions = r.get<int>();
  }
  if (doc.contains("alignment")) {
    const json& a = doc["alignment"];
    AlignmentSpec spec;
    spec.scenario_id = string_at(field(a, "scenario", "$.alignment"), "$.alignment.scenario");
    if (a.contains("repetition")) {
      if (!a["repetition"].is_number_integer() || a["repetition"].get<int>() < 1)
        fail("$.alignment.repetition", "expected a positive integer");
      spec.repetition = a["repetition"].get<int>();
    }
    if (a.contains("with_scale")) {
      if (!a["with_scale"].is_boolean()) fail("$.alignment.with_scale", "expected a boolean");
      spec.with_scale = a["with_scale"].get<bool>();
    }
    m.alignment = spec;
  }

  const json& list = field(doc, "scenarios", "$");
  if (!list.is_array()) fail("$.scenarios", "expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "$.scenarios[" + std::to_string(i) + "]";
    ScenarioEntry entry;
    entry.scenario.id = string_at(field(list[i], "id", where), where + ".id");
    entry.scenario.assignment = assignment_from_json(field(list[i], "assignment", where), where + ".assignment");
    if (list[i].contains("experiments")) {
      const json& exps = list[i]["experiments"];
      if (!exps.is_array()) fail(where + ".experiments", "expected an array");
      for (std::size_t e = 0; e < exps.size(); ++e)
        entry.experiments.push_back(
            experiment_from_json(exps[e], where + ".experiments[" + std::to_string(e) + "]", base_dir));
    }
    m.scenarios.push_back(std::move(entry));
  }

  validate_manifest(m.schema, m.scenario_list());
  if (m.alignment) {
    const ScenarioEntry* s = m.find(m.alignment->scenario_id);
    if (s == nullptr || static_cast<std::size_t>(m.alignment->repetition) > s->experiments.size())
      fail("$.alignment", "calibration experiment does not exist");
  }
  return m;
}

Manifest parse_scenario_manifest(const std::string& path) {
  const std::string contents = text::read_file(path);
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::parse_error& e) {
    fail("$", std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return parse_manifest_json(doc, fs::path(path).parent_path().string());
}

ExperimentRecord load_experiment(const ExperimentRef& ref, const std::string& scenario_id, int repetition) {
  ExperimentRecord rec;
  rec.scenario_id = scenario_id;
  rec.repetition = repetition;
  rec.estimate = shift_time(parse_trajectory_csv(ref.estimate), ref.time_offset);
  rec.reference = parse_trajectory_csv(ref.reference);
  rec.evaluation_times = ref.evaluation_times_path.empty() ? ref.evaluation_times : parse_times_csv(ref.evaluation_times_path);
  return rec;
}

json manifest_to_json(const Manifest& m) {
  json j;
  j["schema"] = schema_to_json(m.schema);
  if (m.performance_classes) j["performance_classes"] = scheme_to_json(*m.performance_classes);
  j["repetitions"] = m.repetitions;
  if (m.alignment)
    j["alignment"] = {{"scenario", m.alignment->scenario_id},
                      {"repetition", m.alignment->repetition},
                      {"with_scale", m.alignment->with_scale}};
  j["scenarios"] = json::array();
  for (const auto& s : m.scenarios) {
    json sj;
    sj["id"] = s.scenario.id;
    sj["assignment"] = assignment_to_json(s.scenario.assignment);
    sj["experiments"] = json::array();
    for (const auto& e : s.experiments) {
      json ej;
      ej["estimate"] = e.estimate;
      ej["reference"] = e.reference;
      if (!e.evaluation_times_path.empty()) ej["evaluation_times"] = e.evaluation_times_path;
      else ej["evaluation_times"] = e.evaluation_times;
      if (e.time_offset != 0.0) ej["time_offset"] = e.time_offset;
      sj["experiments"].push_back(std::move(ej));
    }
    j["scenarios"].push_back(std::move(sj));
  }
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace ilseval::ingest
