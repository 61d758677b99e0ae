#include "ilseval/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ilseval/util/text.hpp"

namespace ilseval {

double Quaternion::norm() const noexcept { return std::sqrt(w * w + x * x + y * y + z * z); }

Trajectory::Trajectory(std::string source_id, std::vector<Pose> poses)
    : source_id_(std::move(source_id)), poses_(std::move(poses)) {
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    const Pose& p = poses_[i];
    if (!std::isfinite(p.t) || !std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw Error(Errc::InvalidArgument, source_id_ + ": pose " + std::to_string(i) + " is not finite");
    }
    if (p.orientation && std::abs(p.orientation->norm() - 1.0) > kQuaternionNormTolerance) {
      throw Error(Errc::InvalidArgument, source_id_ + ": pose " + std::to_string(i) + " has a non-unit quaternion");
    }
    if (i > 0 && !(p.t > poses_[i - 1].t)) {
      throw Error(Errc::NonMonotoneTimestamp, source_id_ + ": timestamp of pose " + std::to_string(i) +
                                                  " does not increase");
    }
  }
}

double Trajectory::start_time() const {
  if (poses_.empty()) throw Error(Errc::EmptyInput, source_id_ + ": empty trajectory");
  return poses_.front().t;
}

double Trajectory::end_time() const {
  if (poses_.empty()) throw Error(Errc::EmptyInput, source_id_ + ": empty trajectory");
  return poses_.back().t;
}

bool Trajectory::has_orientation() const noexcept {
  return !poses_.empty() &&
         std::all_of(poses_.begin(), poses_.end(), [](const Pose& p) { return p.orientation.has_value(); });
}

FactorSchema::FactorSchema(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::vector<Violation> problems;
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    const std::string where = "$.factors[" + std::to_string(i) + "]";
    if (f.name.empty()) problems.push_back({Errc::InvalidSchema, where, "factor name is empty"});
    if (!seen.insert(f.name).second) problems.push_back({Errc::InvalidSchema, where, "duplicate factor '" + f.name + "'"});
    if (f.categorical()) {
      const auto& values = f.categories().values;
      if (values.empty()) problems.push_back({Errc::InvalidSchema, where, "categorical factor '" + f.name + "' has no values"});
      std::set<std::string> distinct(values.begin(), values.end());
      if (distinct.size() != values.size())
        problems.push_back({Errc::InvalidSchema, where, "categorical factor '" + f.name + "' repeats a value"});
    } else {
      const auto& r = f.range();
      if (!(std::isfinite(r.min) && std::isfinite(r.max) && r.min < r.max))
        problems.push_back({Errc::InvalidSchema, where, "continuous factor '" + f.name + "' needs finite min < max"});
      for (double level : r.levels) {
        if (!(level >= r.min && level <= r.max))
          problems.push_back({Errc::InvalidSchema, where,
                              "level " + text::format_double(level) + " of '" + f.name + "' is outside [min, max]"});
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

const Factor* FactorSchema::find(std::string_view name) const noexcept {
  auto it = std::find_if(factors_.begin(), factors_.end(), [&](const Factor& f) { return f.name == name; });
  return it == factors_.end() ? nullptr : &*it;
}

std::optional<std::size_t> FactorSchema::index_of(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].name == name) return i;
  return std::nullopt;
}

std::string format_value(const FactorValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return text::format_double(std::get<double>(value));
}

bool value_less(const FactorValue& a, const FactorValue& b) {
  if (a.index() != b.index()) return a.index() > b.index();  // double (index 1) first
  return a < b;
}

StudySchema::StudySchema(FactorSchema factors) : factors_(std::move(factors)) {}

StudySchema::StudySchema(FactorSchema factors, std::string join_factor,
                         std::vector<std::pair<std::string, std::vector<std::string>>> systems)
    : factors_(std::move(factors)), join_factor_(std::move(join_factor)), systems_(std::move(systems)) {
  std::vector<Violation> problems;
  const Factor* join = factors_.find(join_factor_);
  if (join == nullptr || !join->categorical()) {
    problems.push_back({Errc::InvalidSchema, "$.join_factor", "join factor '" + join_factor_ + "' must be a declared categorical factor"});
  } else {
    std::set<std::string> declared(join->categories().values.begin(), join->categories().values.end());
    std::set<std::string> named;
    for (const auto& [system, _] : systems_) named.insert(system);
    if (declared != named || named.size() != systems_.size())
      problems.push_back({Errc::InvalidSchema, "$.systems", "system names must match the values of '" + join_factor_ + "' one to one"});
  }
  for (const auto& [system, names] : systems_) {
    std::set<std::string> seen;
    for (const auto& n : names) {
      const std::string where = "$.systems." + system;
      if (n == join_factor_) problems.push_back({Errc::InvalidSchema, where, "system lists the join factor"});
      else if (factors_.find(n) == nullptr) problems.push_back({Errc::UnknownFactor, where, "unknown factor '" + n + "'"});
      if (!seen.insert(n).second) problems.push_back({Errc::InvalidSchema, where, "factor '" + n + "' listed twice"});
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::vector<std::string> StudySchema::applicable_factors(std::string_view system) const {
  std::vector<std::string> out;
  if (!joined()) {
    for (const auto& f : factors_.factors()) out.push_back(f.name);
    return out;
  }
  auto it = std::find_if(systems_.begin(), systems_.end(), [&](const auto& s) { return s.first == system; });
  if (it == systems_.end()) throw Error(Errc::ValueOutOfDomain, "unknown system '" + std::string(system) + "'");
  for (const auto& f : factors_.factors()) {
    if (f.name == join_factor_ || std::find(it->second.begin(), it->second.end(), f.name) != it->second.end())
      out.push_back(f.name);
  }
  return out;
}

namespace {

void check_value(const Factor& factor, const FactorValue& value, const std::string& where, std::vector<Violation>& out) {
  if (factor.categorical()) {
    const auto* s = std::get_if<std::string>(&value);
    const auto& values = factor.categories().values;
    if (s == nullptr || std::find(values.begin(), values.end(), *s) == values.end())
      out.push_back({Errc::ValueOutOfDomain, where, "'" + format_value(value) + "' is not a value of '" + factor.name + "'"});
    return;
  }
  const auto* d = std::get_if<double>(&value);
  const auto& r = factor.range();
  if (d == nullptr || !(*d >= r.min && *d <= r.max))
    out.push_back({Errc::ValueOutOfDomain, where,
                   "'" + format_value(value) + "' is outside [" + text::format_double(r.min) + ", " +
                       text::format_double(r.max) + "] of '" + factor.name + "'"});
}

}  // namespace

std::vector<Violation> check_scenario(const StudySchema& schema, const Scenario& scenario, const std::string& where) {
  std::vector<Violation> out;
  const std::string base = where + ".assignment";
  for (const auto& [name, value] : scenario.assignment) {
    const Factor* f = schema.factors().find(name);
    if (f == nullptr) {
      out.push_back({Errc::UnknownFactor, base + "." + name, "unknown factor '" + name + "'"});
      continue;
    }
    check_value(*f, value, base + "." + name, out);
  }

  std::string system;
  if (schema.joined()) {
    auto it = scenario.assignment.find(schema.join_factor());
    if (it == scenario.assignment.end()) {
      out.push_back({Errc::MissingFactor, base, "missing join factor '" + schema.join_factor() + "'"});
      return out;
    }
    system = format_value(it->second);
    const auto& systems = schema.systems();
    if (std::none_of(systems.begin(), systems.end(), [&](const auto& s) { return s.first == system; })) return out;
  }
  const auto required = schema.applicable_factors(system);
  for (const auto& name : required) {
    if (!scenario.assignment.contains(name)) out.push_back({Errc::MissingFactor, base, "missing factor '" + name + "'"});
  }
  for (const auto& [name, value] : scenario.assignment) {
    if (schema.factors().find(name) != nullptr &&
        std::find(required.begin(), required.end(), name) == required.end())
      out.push_back({Errc::UnknownFactor, base + "." + name, "factor '" + name + "' does not apply to system '" + system + "'"});
  }
  return out;
}

std::vector<Scenario> validate_manifest(const StudySchema& schema, std::vector<Scenario> scenarios) {
  std::vector<Violation> problems;
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const std::string where = "$.scenarios[" + std::to_string(i) + "]";
    if (scenarios[i].id.empty()) problems.push_back({Errc::InvalidSchema, where + ".id", "scenario id is empty"});
    if (!ids.insert(scenarios[i].id).second)
      problems.push_back({Errc::DuplicateScenarioId, where + ".id", "duplicate scenario id '" + scenarios[i].id + "'"});
    auto found = check_scenario(schema, scenarios[i], where);
    problems.insert(problems.end(), found.begin(), found.end());
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return scenarios;
}

std::vector<Assignment> full_factorial(const StudySchema& schema) {
  auto expand = [&](const std::vector<std::string>& names, Assignment seed) {
    std::vector<Assignment> rows{std::move(seed)};
    for (const auto& name : names) {
      const Factor& f = *schema.factors().find(name);
      std::vector<FactorValue> values;
      if (f.categorical()) {
        for (const auto& v : f.categories().values) values.emplace_back(v);
      } else {
        if (f.range().levels.empty())
          throw Error(Errc::InvalidPlan, "continuous factor '" + name + "' has no design levels");
        for (double v : f.range().levels) values.emplace_back(v);
      }
      std::vector<Assignment> next;
      next.reserve(rows.size() * values.size());
      for (const auto& row : rows) {
        for (const auto& v : values) {
          Assignment a = row;
          a[name] = v;
          next.push_back(std::move(a));
        }
      }
      rows = std::move(next);
    }
    return rows;
  };

  if (!schema.joined()) return expand(schema.applicable_factors({}), {});
  std::vector<Assignment> out;
  for (const auto& [system, _] : schema.systems()) {
    std::vector<std::string> names;
    for (const auto& n : schema.applicable_factors(system))
      if (n != schema.join_factor()) names.push_back(n);
    auto rows = expand(names, Assignment{{schema.join_factor(), FactorValue{system}}});
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::string_view to_string(SchemeKind kind) noexcept {
  return kind == SchemeKind::Application ? "application" : "technology";
}

SchemeKind parse_scheme_kind(std::string_view text) {
  if (text == "application") return SchemeKind::Application;
  if (text == "technology") return SchemeKind::Technology;
  throw Error(Errc::InvalidArgument, "unknown scheme kind '" + std::string(text) + "'");
}

PerformanceClassScheme::PerformanceClassScheme(SchemeKind kind, std::vector<PerformanceClass> classes,
                                               std::string overflow_label)
    : kind_(kind), classes_(std::move(classes)), overflow_label_(std::move(overflow_label)) {
  std::vector<Violation> problems;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    const std::string where = "$.classes[" + std::to_string(i) + "]";
    if (c.label.empty()) problems.push_back({Errc::InvalidSchema, where, "empty class label"});
    if (!labels.insert(c.label).second) problems.push_back({Errc::InvalidSchema, where, "duplicate label '" + c.label + "'"});
    if (!(std::isfinite(c.lower) && std::isfinite(c.upper) && c.lower < c.upper))
      problems.push_back({Errc::InvalidSchema, where, "class '" + c.label + "' needs finite lower < upper"});
    if (i == 0 && c.lower != 0.0) problems.push_back({Errc::InvalidSchema, where, "first class must start at 0"});
    if (i > 0 && c.lower != classes_[i - 1].upper)
      problems.push_back({Errc::InvalidSchema, where, "class '" + c.label + "' is not contiguous with its predecessor"});
  }
  if (overflow_label_.empty()) problems.push_back({Errc::InvalidSchema, "$.overflow_label", "empty overflow label"});
  if (!labels.insert(overflow_label_).second)
    problems.push_back({Errc::InvalidSchema, "$.overflow_label", "overflow label duplicates a class label"});
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::vector<std::string> PerformanceClassScheme::labels() const {
  std::vector<std::string> out;
  for (const auto& c : classes_) out.push_back(c.label);
  out.push_back(overflow_label_);
  return out;
}

std::optional<std::pair<double, double>> PerformanceClassScheme::interval(std::string_view label) const {
  for (const auto& c : classes_)
    if (c.label == label) return std::pair{c.lower, c.upper};
  if (label == overflow_label_) return std::pair{overflow_lower(), std::numeric_limits<double>::infinity()};
  return std::nullopt;
}

const std::string& PerformanceClassScheme::classify(double value) const {
  for (const auto& c : classes_)
    if (value >= c.lower && value < c.upper) return c.label;
  return overflow_label_;
}

}  // namespace ilseval
