#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Geometry>

#include "ilseval/align/icp.hpp"
#include "ilseval/align/umeyama.hpp"
#include "ilseval/util/text.hpp"
#include "support.hpp"

using namespace ilseval;
using namespace ilseval::align;

namespace {

constexpr double kDeg = M_PI / 180.0;

Eigen::Matrix3d rot_z(double a) { return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix(); }

std::vector<Eigen::Vector3d> random_points(std::mt19937_64& rng, int n, double span = 5.0) {
  std::uniform_real_distribution<double> u(-span, span);
  std::vector<Eigen::Vector3d> p;
  for (int i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng), u(rng));
  return p;
}

std::vector<Eigen::Vector3d> transformed(const std::vector<Eigen::Vector3d>& p, const Eigen::Matrix3d& r,
                                         const Eigen::Vector3d& t) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& x : p) out.push_back(r * x + t);
  return out;
}

double yaw_grid_best_rmse(const std::vector<Eigen::Vector3d>& src, const std::vector<Eigen::Vector3d>& dst) {
  Eigen::Vector3d ms = Eigen::Vector3d::Zero(), md = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    ms += src[i];
    md += dst[i];
  }
  ms /= static_cast<double>(src.size());
  md /= static_cast<double>(src.size());
  double best = std::numeric_limits<double>::infinity();
  for (int d = 0; d < 360; ++d) {
    RigidTransform tf;
    tf.rotation = rot_z(d * kDeg);
    tf.translation = md - tf.rotation * ms;
    best = std::min(best, alignment_rmse(tf, src, dst));
  }
  return best;
}

PointCloud2D random_cloud(std::mt19937_64& rng, int n, double span = 10.0) {
  std::uniform_real_distribution<double> u(0.0, span);
  std::vector<Eigen::Vector2d> p;
  for (int i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng) * 0.6);
  return PointCloud2D(p);
}

PointCloud2D moved(const PointCloud2D& c, double yaw, const Eigen::Vector2d& t) {
  const auto tf = RigidTransform::planar(yaw, t);
  std::vector<Eigen::Vector2d> p;
  for (const auto& x : c.points()) p.push_back(tf.apply(x));
  return PointCloud2D(p);
}

}  // namespace

TEST(Umeyama, IdentityCase) {
  std::mt19937_64 rng(1);
  auto p = random_points(rng, 10);
  auto tf = umeyama_align(p, p);
  EXPECT_LT((tf.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_LT(tf.translation.norm(), 1e-12);
  EXPECT_EQ(tf.scale, 1.0);
}

TEST(Umeyama, RecoversQuarterTurnAndOffset) {
  std::mt19937_64 rng(2);
  auto src = random_points(rng, 8);
  const Eigen::Matrix3d r = rot_z(M_PI / 2);
  const Eigen::Vector3d t(2, 3, 0);
  auto tf = umeyama_align(src, transformed(src, r, t));
  EXPECT_LT((tf.rotation - r).norm(), 1e-9);
  EXPECT_LT((tf.translation - t).norm(), 1e-9);
}

TEST(Umeyama, NoisyNeverWorseThanYawGrid) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    auto src = random_points(rng, 12);
    auto dst = transformed(src, rot_z(trial * 17.3 * kDeg), Eigen::Vector3d(1, -2, 0.5));
    for (auto& d : dst) d += Eigen::Vector3d(n(rng), n(rng), n(rng));
    auto tf = umeyama_align(src, dst);
    EXPECT_LE(alignment_rmse(tf, src, dst), yaw_grid_best_rmse(src, dst) + 1e-12);
  }
}

TEST(Umeyama, ScaleRecovered) {
  std::mt19937_64 rng(4);
  auto src = random_points(rng, 10);
  std::vector<Eigen::Vector3d> dst;
  for (const auto& p : src) dst.push_back(2.5 * (rot_z(0.3) * p) + Eigen::Vector3d(1, 1, 1));
  auto tf = umeyama_align(src, dst, true);
  EXPECT_NEAR(tf.scale, 2.5, 1e-9);
  EXPECT_LT(alignment_rmse(tf, src, dst), 1e-9);
}

TEST(Umeyama, CollinearIsDegenerate) {
  std::vector<Eigen::Vector3d> p{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}};
  try {
    umeyama_align(p, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegenerateConfiguration);
  }
}

TEST(Umeyama, ResidualInvariantUnderCommonRigidMotion) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.1);
  auto src = random_points(rng, 15);
  auto dst = transformed(src, rot_z(0.7), Eigen::Vector3d(0.2, 0.1, -1));
  for (auto& d : dst) d += Eigen::Vector3d(n(rng), n(rng), n(rng));
  const double base = alignment_rmse(umeyama_align(src, dst), src, dst);
  const Eigen::Matrix3d g = Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const Eigen::Vector3d gt(5, -4, 3);
  auto src2 = transformed(src, g, gt);
  auto dst2 = transformed(dst, g, gt);
  EXPECT_NEAR(alignment_rmse(umeyama_align(src2, dst2), src2, dst2), base, 1e-9);
}

TEST(Umeyama, ReflectedTargetStillProperRotation) {
  std::mt19937_64 rng(6);
  auto src = random_points(rng, 10);
  std::vector<Eigen::Vector3d> mirrored;
  for (const auto& p : src) mirrored.emplace_back(p.x(), p.y(), -p.z());
  auto tf = umeyama_align(src, mirrored);
  EXPECT_NEAR(tf.rotation.determinant(), 1.0, 1e-12);
  // Nearly planar sets are the adversarial case for reflections.
  std::vector<Eigen::Vector3d> flat, flat_mirror;
  for (const auto& p : src) {
    flat.emplace_back(p.x(), p.y(), 1e-7 * p.z());
    flat_mirror.emplace_back(-p.x(), p.y(), 1e-7 * p.z());
  }
  EXPECT_NEAR(umeyama_align(flat, flat_mirror).rotation.determinant(), 1.0, 1e-12);
}

TEST(ApplyTransform, IdentityTranslationAndInverse) {
  std::vector<Pose> p{{0.0, 0, 0, 0, Quaternion{}}, {1.0, 1, 2, 3, Quaternion{std::sqrt(0.5), 0, 0, std::sqrt(0.5)}}};
  Trajectory t("t", p);
  auto same = apply_transform(RigidTransform{}, t);
  EXPECT_EQ(same[1].x, 1.0);
  EXPECT_EQ(same[1].orientation->w, t[1].orientation->w);

  RigidTransform shift;
  shift.translation = Eigen::Vector3d(1, 0, 0);
  auto s = apply_transform(shift, t);
  EXPECT_EQ(s[0].x, 1.0);
  EXPECT_EQ(s[0].y, 0.0);

  RigidTransform tf;
  tf.rotation = Eigen::AngleAxisd(0.4, Eigen::Vector3d(1, 1, 0).normalized()).toRotationMatrix();
  tf.translation = Eigen::Vector3d(3, -1, 2);
  auto back = apply_transform(tf.inverse(), apply_transform(tf, t));
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(back[i].x, t[i].x, 1e-9);
    EXPECT_NEAR(back[i].y, t[i].y, 1e-9);
    EXPECT_NEAR(back[i].z, t[i].z, 1e-9);
    EXPECT_NEAR(std::abs(back[i].orientation->w), std::abs(t[i].orientation->w), 1e-9);
    EXPECT_EQ(back[i].t, t[i].t);
  }
}

TEST(TransformJson, RoundTrip) {
  RigidTransform tf;
  tf.rotation = rot_z(0.123);
  tf.translation = Eigen::Vector3d(1.5, -2.25, 0.1);
  auto back = transform_from_json(transform_to_json(tf));
  EXPECT_EQ(back.rotation, tf.rotation);
  EXPECT_EQ(back.translation, tf.translation);
}

TEST(GlobalRegister, IdenticalCloudsGiveIdentity) {
  std::mt19937_64 rng(8);
  auto c = random_cloud(rng, 150);
  auto tf = global_register(c, c);
  EXPECT_NEAR(tf.yaw(), 0.0, 1e-12);
  EXPECT_LT(tf.translation.norm(), 1e-9);
}

TEST(GlobalRegister, RecoversThirtySevenDegrees) {
  std::mt19937_64 rng(9);
  auto c = random_cloud(rng, 200);
  auto tf = global_register(c, moved(c, 37 * kDeg, {1.0, -0.5}));
  double yaw = tf.yaw() / kDeg;
  EXPECT_NEAR(yaw, 37.0, 1.0);
}

TEST(GlobalRegister, UnrelatedCloudsStillReturn) {
  std::mt19937_64 rng(10);
  EXPECT_NO_THROW(global_register(random_cloud(rng, 50), random_cloud(rng, 60)));
}

TEST(GlobalRegister, DegenerateInputs) {
  PointCloud2D two({{0, 0}, {1, 1}});
  PointCloud2D same({{1, 1}, {1, 1}, {1, 1}});
  std::mt19937_64 rng(11);
  auto ok = random_cloud(rng, 20);
  EXPECT_THROW(global_register(two, ok), Error);
  EXPECT_THROW(global_register(same, ok), Error);
}

TEST(Icp, PerfectMatch) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 5; ++i) {
    auto c = random_cloud(rng, 100 + 20 * i);
    auto s = icp_fitness(c, c);
    EXPECT_EQ(s.fitness, 1.0);
    EXPECT_NEAR(s.inlier_rmse, 0.0, 1e-12);
  }
}

TEST(Icp, ThreePointMinimum) {
  PointCloud2D c({{0, 0}, {1, 0}, {0, 2}});
  auto s = icp_fitness(c, c);
  EXPECT_EQ(s.fitness, 1.0);
}

TEST(Icp, RigidlyMovedCopy) {
  std::mt19937_64 rng(13);
  auto c = random_cloud(rng, 200);
  auto s = icp_fitness(c, moved(c, 30 * kDeg, {2.0, 0.0}));
  EXPECT_GE(s.fitness, 0.99);
  EXPECT_NEAR(s.transform.yaw(), 30 * kDeg, 1e-6);
}

TEST(Icp, PartialOverlapMatchesExhaustiveOracle) {
  std::mt19937_64 rng(14);
  auto c = random_cloud(rng, 250);
  std::vector<std::size_t> idx(c.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  const double yaw = 12 * kDeg;
  const Eigen::Vector2d t(0.8, -0.3);
  const auto truth = RigidTransform::planar(yaw, t);
  std::vector<Eigen::Vector2d> kept;
  for (std::size_t i = 0; i < c.size() * 6 / 10; ++i) kept.push_back(truth.apply(c.points()[idx[i]]));
  PointCloud2D dst(kept);

  const double radius = 0.1;
  std::size_t inliers = 0;
  for (const auto& p : c.points()) {
    const Eigen::Vector2d q = truth.apply(p);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : dst.points()) best = std::min(best, (q - d).norm());
    inliers += best <= radius;
  }
  const double oracle = static_cast<double>(inliers) / static_cast<double>(c.size());
  auto s = icp_fitness(c, dst, radius);
  EXPECT_LT(s.fitness, 1.0);
  EXPECT_NEAR(s.fitness, oracle, 0.02);
}

TEST(Icp, MeanSquaredDistanceNeverIncreases) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> n(0.0, 0.02);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_cloud(rng, 150);
    std::vector<Eigen::Vector2d> noisy;
    for (const auto& p : moved(c, (trial * 23) * kDeg, {1.0, trial * 0.3}).points()) {
      noisy.emplace_back(p.x() + n(rng), p.y() + n(rng));
    }
    auto s = icp_fitness(c, PointCloud2D(noisy), 0.1);
    for (std::size_t i = 1; i < s.mse_history.size(); ++i) {
      EXPECT_LE(s.mse_history[i], s.mse_history[i - 1] + 1e-12);
    }
    EXPECT_GE(s.fitness, 0.0);
    EXPECT_LE(s.fitness, 1.0);
  }
}

TEST(Icp, NearestNeighborMatchesBruteForce) {
  std::mt19937_64 rng(16);
  auto c = random_cloud(rng, 300);
  NearestNeighbors2D nn(c);
  std::uniform_real_distribution<double> u(-1, 11);
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector2d q(u(rng), u(rng));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : c.points()) best = std::min(best, (p - q).norm());
    EXPECT_DOUBLE_EQ(nn.nearest(q).distance, best);
  }
}

TEST(PointCloudCsv, ParseRoundTrip) {
  ilseval::testing::TempDir dir("cloud");
  PointCloud2D c({{0.5, 1.25}, {-3, 4}, {7, 8}});
  text::write_file(dir.file("c.csv"), format_point_cloud_csv(c));
  auto back = parse_point_cloud_csv(dir.file("c.csv"));
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back.points()[1], c.points()[1]);
}
