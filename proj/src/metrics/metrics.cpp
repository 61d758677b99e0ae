#include "ilseval/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace ilseval::metrics {

CdfCurve::CdfCurve(std::vector<CdfPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(Errc::EmptyInput, "empty CDF");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.fraction > 0.0 && p.fraction <= 1.0)) throw Error(Errc::InvalidArgument, "CDF fraction outside (0, 1]");
    if (i > 0 && !(p.error > points_[i - 1].error && p.fraction > points_[i - 1].fraction))
      throw Error(Errc::InvalidArgument, "CDF must increase strictly");
  }
  if (points_.back().fraction != 1.0) throw Error(Errc::InvalidArgument, "CDF must end at 1");
}

double CdfCurve::at(double error) const noexcept {
  auto it = std::upper_bound(points_.begin(), points_.end(), error,
                             [](double e, const CdfPoint& p) { return e < p.error; });
  return it == points_.begin() ? 0.0 : std::prev(it)->fraction;
}

double CdfCurve::read_off(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(Errc::InvalidArgument, "q must lie in [0, 1]");
  for (const auto& p : points_)
    if (p.fraction >= q) return p.error;
  return points_.back().error;
}

std::vector<ErrorSample> horizontal_errors(std::span<const ingest::SyncedSamplePair> pairs) {
  if (pairs.empty()) throw Error(Errc::EmptyInput, "no synced pairs");
  std::vector<ErrorSample> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const double dx = p.estimate_xy[0] - p.reference_xy[0];
    const double dy = p.estimate_xy[1] - p.reference_xy[1];
    out.push_back({p.t, std::hypot(dx, dy)});
  }
  return out;
}

std::vector<double> error_values(std::span<const ErrorSample> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.horizontal_error);
  return out;
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(Errc::EmptyInput, "percentile of an empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(Errc::InvalidArgument, "q must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "mean of an empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

CdfCurve cdf(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "CDF of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> points;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k]) continue;  // keep the last of a run
    points.push_back({sorted[k], static_cast<double>(k + 1) / n});
  }
  return CdfCurve(std::move(points));
}

ExperimentSummary summarize(const std::string& scenario_id, int repetition, std::span<const double> errors, double q) {
  ExperimentSummary s;
  s.scenario_id = scenario_id;
  s.repetition = repetition;
  s.n_samples = errors.size();
  s.h95 = percentile(errors, kH95Quantile);
  s.median = percentile(errors, 0.5);
  s.mean = mean(errors);
  s.metric = percentile(errors, q);
  return s;
}

Aggregate aggregate_scenario(const std::string& scenario_id, std::span<const double> per_repetition_values,
                             int expected_repetitions) {
  if (per_repetition_values.empty())
    throw Error(Errc::MissingRepetitions, "scenario '" + scenario_id + "' has no repetitions");
  Aggregate out;
  out.metrics.scenario_id = scenario_id;
  out.metrics.per_repetition_h95.assign(per_repetition_values.begin(), per_repetition_values.end());
  for (double v : per_repetition_values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::InvalidArgument, "metric values must be finite and >= 0");
  out.metrics.mean_h95 = mean(per_repetition_values);
  if (expected_repetitions > 0 && per_repetition_values.size() < static_cast<std::size_t>(expected_repetitions))
    out.warnings.push_back(std::string(to_string(Errc::MissingRepetitions)) + ": scenario '" + scenario_id + "' has " +
                           std::to_string(per_repetition_values.size()) + " of " +
                           std::to_string(expected_repetitions) + " repetitions");
  return out;
}

double repeatability(std::span<const CdfCurve> curves) {
  if (curves.size() < 2) throw Error(Errc::TooFewCurves, "need at least two CDF curves");
  double worst = 0.0;
  for (std::size_t a = 0; a < curves.size(); ++a) {
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      // The supremum of |F_a - F_b| is attained at a jump of either curve.
      for (const auto* curve : {&curves[a], &curves[b]})
        for (const auto& p : curve->points())
          worst = std::max(worst, std::abs(curves[a].at(p.error) - curves[b].at(p.error)));
    }
  }
  return worst;
}

}  // namespace ilseval::metrics
