#pragma once

#include <span>
#include <string>
#include <vector>

#include "ilseval/core/model.hpp"

namespace ilseval::categorize {

inline constexpr int kDefaultKMax = 8;

struct ClusteringResult {
  int k{0};
  /// Cluster index per input value (input order); clusters ordered by center.
  std::vector<std::size_t> assignments;
  std::vector<double> centers;
  std::vector<double> minima;
  std::vector<double> maxima;
  double sse{0.0};
};

/// Labels the metrics with the class whose [lower, upper) holds mean_h95.
ScenarioMetrics classify_application(ScenarioMetrics metrics, const PerformanceClassScheme& scheme);

/// Globally SSE-optimal partition of the sorted values into k contiguous
/// groups (dynamic programming). Runs of equal values are never split, so
/// k may not exceed the number of distinct values (InvalidK).
ClusteringResult kmeans_1d_exact(std::span<const double> values, int k);

/// SSE(k) for k = 1..k_max; k beyond the distinct-value count yields 0.
std::vector<double> sse_curve(std::span<const double> values, int k_max);

/// Elbow on a precomputed SSE curve (sse[0] = SSE(1)): the k in
/// [2, k_max - 1] maximizing the second difference of log SSE, smaller k
/// on ties.
int elbow_from_sse(std::span<const double> sse);
int elbow_select_k(std::span<const double> values, int k_max = kDefaultKMax);

/// I, II, III, ...
std::string roman_numeral(int n);
std::vector<std::string> roman_labels(int k);

/// Class i spans [min of cluster i, min of cluster i+1); the first class
/// starts at 0 and the last cluster becomes the overflow class.
PerformanceClassScheme scheme_from_clusters(const ClusteringResult& result, std::span<const std::string> labels,
                                            SchemeKind kind = SchemeKind::Technology);

}  // namespace ilseval::categorize
