#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ilseval/categorize/categorize.hpp"
#include "ilseval/synthgen/case_study.hpp"

using namespace ilseval;
using namespace ilseval::categorize;

namespace {

/// Minimum SSE over every split of the sorted values into k non-empty
/// contiguous runs, by recursive enumeration.
double brute_force_sse(std::vector<double> v, int k) {
  std::sort(v.begin(), v.end());
  const int n = static_cast<int>(v.size());
  auto cost = [&](int a, int b) {
    double m = 0;
    for (int i = a; i < b; ++i) m += v[i];
    m /= (b - a);
    double s = 0;
    for (int i = a; i < b; ++i) s += (v[i] - m) * (v[i] - m);
    return s;
  };
  std::function<double(int, int)> rec = [&](int start, int left) -> double {
    if (left == 1) return cost(start, n);
    double best = std::numeric_limits<double>::infinity();
    for (int cut = start + 1; cut <= n - left + 1; ++cut) best = std::min(best, cost(start, cut) + rec(cut, left - 1));
    return best;
  };
  return rec(0, k);
}

/// Three groups of 3..10 points; every gap is 20x to 50x the common spread.
std::vector<double> three_groups(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double spread = 0.001 + 0.05 * u(rng);
  std::vector<double> v;
  double base = u(rng);
  for (int g = 0; g < 3; ++g) {
    const int m = 3 + static_cast<int>(rng() % 8);
    for (int i = 0; i < m; ++i) v.push_back(base + spread * u(rng));
    base += spread + spread * (20.0 + 30.0 * u(rng));
  }
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

double sse_of(const ClusteringResult& r, const std::vector<double>& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(v[i] - r.centers[r.assignments[i]], 2);
  return s;
}

}  // namespace

TEST(ClassifyApplication, TableBoundaries) {
  const auto scheme = synthgen::case_study::application_scheme();
  auto label = [&](double v) {
    ScenarioMetrics m;
    m.mean_h95 = v;
    return *classify_application(m, scheme).class_label;
  };
  EXPECT_EQ(label(0.04), "A");
  EXPECT_EQ(label(0.05), "B");
  EXPECT_EQ(label(0.3), "C");
  EXPECT_EQ(label(1.2), "unclassified");
}

TEST(KMeans, TwoObviousClusters) {
  std::vector<double> v{0, 0.1, 5, 5.1};
  auto r = kmeans_1d_exact(v, 2);
  EXPECT_EQ(r.assignments, (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_NEAR(r.sse, 0.01, 1e-12);
  EXPECT_NEAR(r.sse, brute_force_sse(v, 2), 1e-12);
}

TEST(KMeans, SingleClusterIsVarianceTimesN) {
  std::vector<double> v{0.3, 0.9, 0.1, 0.7, 0.5};
  auto r = kmeans_1d_exact(v, 1);
  EXPECT_NEAR(r.centers[0], 0.5, 1e-15);
  EXPECT_NEAR(r.sse, 0.4, 1e-12);
}

TEST(KMeans, KEqualsNHasZeroSse) {
  std::vector<double> v{0.3, 0.9, 0.1, 0.7};
  EXPECT_EQ(kmeans_1d_exact(v, 4).sse, 0.0);
}

TEST(KMeans, InvalidK) {
  std::vector<double> v{1, 1, 2};
  EXPECT_THROW(kmeans_1d_exact(v, 0), Error);
  EXPECT_THROW(kmeans_1d_exact(v, 3), Error);
  std::vector<double> none;
  EXPECT_THROW(kmeans_1d_exact(none, 1), Error);
}

TEST(KMeans, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 11;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = std::round(u(rng) * 1000.0) / 1000.0;
    std::vector<double> distinct = v;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int k = 1; k <= std::min<int>(4, static_cast<int>(distinct.size())); ++k) {
      auto r = kmeans_1d_exact(v, k);
      EXPECT_NEAR(r.sse, brute_force_sse(v, k), 1e-12) << "n=" << n << " k=" << k;
      EXPECT_NEAR(r.sse, sse_of(r, v), 1e-12);
    }
  }
}

TEST(SseCurve, NonIncreasing) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(20);
    for (auto& x : v) x = u(rng);
    auto s = sse_curve(v, 8);
    for (std::size_t k = 1; k < s.size(); ++k) EXPECT_LE(s[k], s[k - 1] + 1e-12);
  }
}

TEST(Elbow, ThreeSeparatedGroups) {
  std::vector<double> v{0.0, 0.01, 0.02, 0.03, 0.04, 1.0, 1.01, 1.02, 1.03, 1.04, 3.0, 3.01, 3.02, 3.03, 3.04};
  EXPECT_EQ(elbow_select_k(v, 8), 3);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) EXPECT_EQ(elbow_select_k(three_groups(rng), 8), 3);
}

TEST(Elbow, EvenlySpacedGivesSmallestK) {
  std::vector<double> v;
  for (int i = 0; i < 40; ++i) v.push_back(i * 0.025);
  EXPECT_EQ(elbow_select_k(v, 8), 2);
}

TEST(Elbow, FiveClassFixture) {
  std::vector<double> v;
  for (int i = 0; i <= 20; ++i) v.push_back(0.030 + 0.004 * i / 20.0);
  v.push_back(0.052);
  for (int i = 0; i <= 9; ++i) v.push_back(0.088 + 0.004 * i / 9.0);
  for (double x : {0.28, 0.285, 0.29, 0.295, 0.44, 0.445, 0.70, 0.71}) v.push_back(x);
  ASSERT_EQ(v.size(), 40u);
  const int k = elbow_select_k(v, 8);
  EXPECT_EQ(k, 5);
  auto r = kmeans_1d_exact(v, k);
  auto scheme = scheme_from_clusters(r, roman_labels(k));
  std::map<std::string, int> counts;
  for (double x : v) ++counts[scheme.classify(x)];
  EXPECT_EQ(counts["I"], 22);
  EXPECT_EQ(counts["II"], 10);
  EXPECT_EQ(counts["III"], 4);
  EXPECT_EQ(counts["IV"], 2);
  EXPECT_EQ(counts["V"], 2);
}

TEST(Elbow, NeedsEnoughValues) {
  std::vector<double> v{1, 2, 3};
  EXPECT_THROW(elbow_select_k(v, 8), Error);
  EXPECT_THROW(elbow_select_k(v, 2), Error);
}

TEST(SchemeFromClusters, BoundaryAtNextMinimum) {
  std::vector<double> v{0.03, 0.05, 0.06, 0.2};
  ClusteringResult r;
  r.k = 2;
  r.assignments = {0, 0, 1, 1};
  r.centers = {0.04, 0.13};
  r.minima = {0.03, 0.06};
  r.maxima = {0.05, 0.2};
  auto s = scheme_from_clusters(r, roman_labels(2));
  ASSERT_EQ(s.classes().size(), 1u);
  EXPECT_EQ(s.classes()[0].label, "I");
  EXPECT_EQ(s.classes()[0].lower, 0.0);
  EXPECT_EQ(s.classes()[0].upper, 0.06);
  EXPECT_EQ(s.overflow_label(), "II");
  EXPECT_EQ(s.kind(), SchemeKind::Technology);
}

TEST(SchemeFromClusters, SingleClusterIsUnbounded) {
  std::vector<double> v{0.1, 0.2};
  auto s = scheme_from_clusters(kmeans_1d_exact(v, 1), roman_labels(1));
  EXPECT_TRUE(s.classes().empty());
  EXPECT_EQ(s.classify(0.0), "I");
  EXPECT_EQ(s.classify(1e9), "I");
}

TEST(SchemeFromClusters, ValidForEveryClustering) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(3 + trial % 15);
    for (auto& x : v) x = std::round(u(rng) * 50) / 50;
    std::vector<double> d = v;
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    for (int k = 1; k <= static_cast<int>(d.size()) && k <= 6; ++k) {
      auto r = kmeans_1d_exact(v, k);
      if (r.minima[0] == 0.0 && k > 1 && r.minima[1] == 0.0) continue;
      PerformanceClassScheme s;
      ASSERT_NO_THROW(s = scheme_from_clusters(r, roman_labels(k)));
      for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(s.classify(v[i]), roman_numeral(static_cast<int>(r.assignments[i]) + 1));
    }
  }
}

TEST(Roman, Numerals) {
  EXPECT_EQ(roman_numeral(1), "I");
  EXPECT_EQ(roman_numeral(4), "IV");
  EXPECT_EQ(roman_numeral(9), "IX");
  EXPECT_EQ(roman_numeral(14), "XIV");
}
