#include "ilseval/categorize/categorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ilseval::categorize {

ScenarioMetrics classify_application(ScenarioMetrics metrics, const PerformanceClassScheme& scheme) {
  metrics.class_label = scheme.classify(metrics.mean_h95);
  return metrics;
}

namespace {

std::size_t distinct_count(std::span<const double> sorted) {
  if (sorted.empty()) return 0;
  std::size_t n = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] != sorted[i - 1]) ++n;
  return n;
}

}  // namespace

ClusteringResult kmeans_1d_exact(std::span<const double> values, int k) {
  const std::size_t n = values.size();
  for (double v : values)
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "values must be finite");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw Error(Errc::InvalidK, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = values[order[i]];
  if (static_cast<std::size_t>(k) > distinct_count(x))
    throw Error(Errc::InvalidK, "k=" + std::to_string(k) + " exceeds the number of distinct values");

  // Prefix sums of values shifted by the median keep the interval cost well conditioned.
  const double shift = x[n / 2];
  std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - shift;
    s1[i + 1] = s1[i] + d;
    s2[i + 1] = s2[i] + d * d;
  }
  auto cost = [&](std::size_t begin, std::size_t end) {  // [begin, end)
    const double len = static_cast<double>(end - begin);
    const double a = s1[end] - s1[begin];
    return std::max(0.0, (s2[end] - s2[begin]) - a * a / len);
  };

  const auto kk = static_cast<std::size_t>(k);
  constexpr double inf = std::numeric_limits<double>::infinity();
  // best[m][j]: minimal cost of covering x[0, j) with m clusters; start[m][j]: first index of the last cluster.
  std::vector<std::vector<double>> best(kk + 1, std::vector<double>(n + 1, inf));
  std::vector<std::vector<std::size_t>> start(kk + 1, std::vector<std::size_t>(n + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t m = 1; m <= kk; ++m) {
    for (std::size_t j = m; j <= n; ++j) {
      for (std::size_t i = m - 1; i < j; ++i) {
        if (best[m - 1][i] == inf) continue;
        if (i > 0 && x[i] == x[i - 1]) continue;  // never split a run of equal values
        const double c = best[m - 1][i] + cost(i, j);
        if (c < best[m][j]) {
          best[m][j] = c;
          start[m][j] = i;
        }
      }
    }
  }

  std::vector<std::size_t> bounds(kk + 1);
  bounds[kk] = n;
  for (std::size_t m = kk; m >= 1; --m) bounds[m - 1] = start[m][bounds[m]];

  ClusteringResult r;
  r.k = k;
  r.assignments.assign(n, 0);
  for (std::size_t c = 0; c < kk; ++c) {
    double sum = 0.0;
    for (std::size_t i = bounds[c]; i < bounds[c + 1]; ++i) sum += x[i];
    const double center = sum / static_cast<double>(bounds[c + 1] - bounds[c]);
    r.centers.push_back(center);
    r.minima.push_back(x[bounds[c]]);
    r.maxima.push_back(x[bounds[c + 1] - 1]);
    for (std::size_t i = bounds[c]; i < bounds[c + 1]; ++i) {
      r.assignments[order[i]] = c;
      r.sse += (x[i] - center) * (x[i] - center);
    }
  }
  return r;
}

std::vector<double> sse_curve(std::span<const double> values, int k_max) {
  if (values.empty()) throw Error(Errc::EmptyInput, "no values to cluster");
  if (k_max < 1) throw Error(Errc::InvalidK, "k_max must be >= 1");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto distinct = static_cast<int>(distinct_count(sorted));
  std::vector<double> out;
  for (int k = 1; k <= k_max; ++k) out.push_back(k <= distinct ? kmeans_1d_exact(values, k).sse : 0.0);
  return out;
}

int elbow_from_sse(std::span<const double> sse) {
  const int k_max = static_cast<int>(sse.size());
  if (k_max < 3) throw Error(Errc::InvalidK, "elbow needs k_max >= 3");
  // Zero SSE is floored so that a perfect fit at k0 still scores as the elbow.
  const double floor = std::max(sse[0] * 1e-12, std::numeric_limits<double>::min());
  auto log_sse = [&](int k) { return std::log(std::max(sse[static_cast<std::size_t>(k - 1)], floor)); };
  int best_k = 2;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 2; k <= k_max - 1; ++k) {
    const double d = log_sse(k - 1) - 2.0 * log_sse(k) + log_sse(k + 1);
    if (k == 2 || d > best + 1e-12 * std::max(1.0, std::abs(best))) {
      best = d;
      best_k = k;
    }
  }
  return best_k;
}

int elbow_select_k(std::span<const double> values, int k_max) {
  if (k_max < 3) throw Error(Errc::InvalidK, "k_max must be >= 3");
  if (values.size() <= static_cast<std::size_t>(k_max))
    throw Error(Errc::InvalidK, "need more than k_max=" + std::to_string(k_max) + " values");
  return elbow_from_sse(sse_curve(values, k_max));
}

std::string roman_numeral(int n) {
  if (n < 1 || n > 3999) throw Error(Errc::InvalidArgument, "roman numeral out of range");
  static constexpr std::pair<int, const char*> table[] = {{1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"},
                                                          {100, "C"},  {90, "XC"},  {50, "L"},  {40, "XL"},
                                                          {10, "X"},   {9, "IX"},   {5, "V"},   {4, "IV"},
                                                          {1, "I"}};
  std::string out;
  for (const auto& [value, glyph] : table) {
    while (n >= value) {
      out += glyph;
      n -= value;
    }
  }
  return out;
}

std::vector<std::string> roman_labels(int k) {
  std::vector<std::string> out;
  for (int i = 1; i <= k; ++i) out.push_back(roman_numeral(i));
  return out;
}

PerformanceClassScheme scheme_from_clusters(const ClusteringResult& result, std::span<const std::string> labels,
                                            SchemeKind kind) {
  const auto k = static_cast<std::size_t>(result.k);
  if (labels.size() != k || result.minima.size() != k)
    throw Error(Errc::InvalidArgument, "need exactly one label per cluster");
  std::vector<PerformanceClass> classes;
  double lower = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double upper = result.minima[i + 1];
    if (!(upper > lower))
      throw Error(Errc::InvalidArgument, "cluster boundaries must be positive and increasing");
    classes.push_back({labels[i], lower, upper});
    lower = upper;
  }
  return PerformanceClassScheme(kind, std::move(classes), labels[k - 1]);
}

}  // namespace ilseval::categorize
