#pragma once

// Shared domain types. All of them validate on construction and are
// immutable afterwards.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ilseval/core/error.hpp"

namespace ilseval {

struct Quaternion {
  double w{1.0};
  double x{0.0};
  double y{0.0};
  double z{0.0};

  double norm() const noexcept;
};

inline constexpr double kQuaternionNormTolerance = 1e-9;

struct Pose {
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double z{0.0};
  std::optional<Quaternion> orientation;
};

/// Timestamped poses from one source. Timestamps are strictly increasing.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::string source_id, std::vector<Pose> poses);

  const std::string& source_id() const noexcept { return source_id_; }
  std::span<const Pose> poses() const noexcept { return poses_; }
  const Pose& operator[](std::size_t i) const { return poses_[i]; }
  std::size_t size() const noexcept { return poses_.size(); }
  bool empty() const noexcept { return poses_.empty(); }
  double start_time() const;
  double end_time() const;
  bool has_orientation() const noexcept;

 private:
  std::string source_id_;
  std::vector<Pose> poses_;
};

struct CategoricalDomain {
  std::vector<std::string> values;
};

struct ContinuousDomain {
  std::string unit;
  double min{0.0};
  double max{1.0};
  /// Design levels used when enumerating a full factorial. Optional.
  std::vector<double> levels;
};

struct Factor {
  std::string name;
  std::variant<CategoricalDomain, ContinuousDomain> domain;

  bool categorical() const noexcept { return std::holds_alternative<CategoricalDomain>(domain); }
  const CategoricalDomain& categories() const { return std::get<CategoricalDomain>(domain); }
  const ContinuousDomain& range() const { return std::get<ContinuousDomain>(domain); }
};

class FactorSchema {
 public:
  FactorSchema() = default;
  /// Throws ValidationError (InvalidSchema) on duplicate names, empty
  /// category lists, min >= max or levels outside [min, max].
  explicit FactorSchema(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  const Factor* find(std::string_view name) const noexcept;
  std::optional<std::size_t> index_of(std::string_view name) const noexcept;

 private:
  std::vector<Factor> factors_;
};

using FactorValue = std::variant<std::string, double>;
using Assignment = std::map<std::string, FactorValue, std::less<>>;

std::string format_value(const FactorValue& value);
/// Orders numbers before text, then by value.
bool value_less(const FactorValue& a, const FactorValue& b);

struct Scenario {
  std::string id;
  Assignment assignment;
};

/// The factor set of a study: either one schema every scenario covers
/// completely, or per-system factor subsets joined by a categorical
/// factor whose values are the system names (e.g. ILS = UWB | LiDAR).
class StudySchema {
 public:
  StudySchema() = default;
  explicit StudySchema(FactorSchema factors);
  StudySchema(FactorSchema factors, std::string join_factor,
              std::vector<std::pair<std::string, std::vector<std::string>>> systems);

  /// Joint schema; factor order here is the tie-break order for tree learning.
  const FactorSchema& factors() const noexcept { return factors_; }
  bool joined() const noexcept { return !join_factor_.empty(); }
  const std::string& join_factor() const noexcept { return join_factor_; }
  const std::vector<std::pair<std::string, std::vector<std::string>>>& systems() const noexcept { return systems_; }

  /// Factor names a scenario of the given system must assign, in schema
  /// order, including the join factor. For an unjoined study the system
  /// name is ignored.
  std::vector<std::string> applicable_factors(std::string_view system) const;

 private:
  FactorSchema factors_;
  std::string join_factor_;
  std::vector<std::pair<std::string, std::vector<std::string>>> systems_;
};

/// Checks one scenario against the study. Returns an empty list if it conforms.
std::vector<Violation> check_scenario(const StudySchema& schema, const Scenario& scenario, const std::string& where);

/// Returns the scenarios unchanged iff all of them conform and ids are
/// unique; otherwise throws a ValidationError listing every violation.
std::vector<Scenario> validate_manifest(const StudySchema& schema, std::vector<Scenario> scenarios);

/// Enumerates every combination of categorical values and continuous
/// design levels, per system for joined studies, in schema order.
std::vector<Assignment> full_factorial(const StudySchema& schema);

struct ExperimentRecord {
  std::string scenario_id;
  int repetition{1};
  Trajectory estimate;
  Trajectory reference;
  std::vector<double> evaluation_times;
};

struct ScenarioMetrics {
  std::string scenario_id;
  std::vector<double> per_repetition_h95;
  double mean_h95{0.0};
  std::optional<std::string> class_label;
};

enum class SchemeKind { Application, Technology };
std::string_view to_string(SchemeKind kind) noexcept;
SchemeKind parse_scheme_kind(std::string_view text);

struct PerformanceClass {
  std::string label;
  double lower{0.0};  // inclusive
  double upper{0.0};  // exclusive
};

class PerformanceClassScheme {
 public:
  PerformanceClassScheme() = default;
  /// Classes must be contiguous and strictly increasing with first lower 0.
  /// Values at or above the last upper bound get overflow_label.
  PerformanceClassScheme(SchemeKind kind, std::vector<PerformanceClass> classes, std::string overflow_label);

  SchemeKind kind() const noexcept { return kind_; }
  const std::vector<PerformanceClass>& classes() const noexcept { return classes_; }
  const std::string& overflow_label() const noexcept { return overflow_label_; }
  /// Lower bound of the overflow interval.
  double overflow_lower() const noexcept { return classes_.empty() ? 0.0 : classes_.back().upper; }
  /// All labels in increasing order, overflow last.
  std::vector<std::string> labels() const;
  /// [lower, upper) of a label; upper is +inf for the overflow label.
  std::optional<std::pair<double, double>> interval(std::string_view label) const;

  const std::string& classify(double value) const;

 private:
  SchemeKind kind_{SchemeKind::Application};
  std::vector<PerformanceClass> classes_;
  std::string overflow_label_{"unclassified"};
};

}  // namespace ilseval
