#pragma once

#include <span>
#include <string>
#include <vector>

#include "ilseval/core/model.hpp"
#include "ilseval/ingest/sync.hpp"

namespace ilseval::metrics {

inline constexpr double kH95Quantile = 0.95;

struct ErrorSample {
  double t{0.0};
  double horizontal_error{0.0};  // meters
};

struct CdfPoint {
  double error{0.0};
  double fraction{0.0};
};

/// Empirical CDF with duplicate errors collapsed; fractions rise strictly to 1.
class CdfCurve {
 public:
  CdfCurve() = default;
  explicit CdfCurve(std::vector<CdfPoint> points);

  const std::vector<CdfPoint>& points() const noexcept { return points_; }
  /// Fraction of samples <= error (right-continuous step function).
  double at(double error) const noexcept;
  /// Smallest error whose cumulative fraction reaches q.
  double read_off(double q) const;

 private:
  std::vector<CdfPoint> points_;
};

/// e_i = |estimate_xy - reference_xy|; z never enters.
std::vector<ErrorSample> horizontal_errors(std::span<const ingest::SyncedSamplePair> pairs);
std::vector<double> error_values(std::span<const ErrorSample> samples);

/// Linear interpolation between closest ranks: rank = q (n - 1).
double percentile(std::span<const double> values, double q);
double mean(std::span<const double> values);

CdfCurve cdf(std::span<const double> values);

/// Per-experiment figures written to the experiment report.
struct ExperimentSummary {
  std::string scenario_id;
  int repetition{1};
  std::size_t n_samples{0};
  double h95{0.0};
  double median{0.0};
  double mean{0.0};
  double metric{0.0};  // percentile at the configured q
};

ExperimentSummary summarize(const std::string& scenario_id, int repetition, std::span<const double> errors,
                            double q = kH95Quantile);

struct Aggregate {
  ScenarioMetrics metrics;
  std::vector<std::string> warnings;
};

/// Arithmetic mean of the per-repetition values. Fewer repetitions than
/// expected is a warning; zero repetitions throws MissingRepetitions.
Aggregate aggregate_scenario(const std::string& scenario_id, std::span<const double> per_repetition_values,
                             int expected_repetitions = 0);

/// Maximum pairwise Kolmogorov-Smirnov distance between step CDFs.
double repeatability(std::span<const CdfCurve> curves);

}  // namespace ilseval::metrics
