#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ilseval/align/transform.hpp"

namespace ilseval::align {

inline constexpr double kDefaultInlierRadius = 0.1;  // meters
inline constexpr int kDefaultMaxIterations = 50;
inline constexpr double kDefaultYawStepDeg = 1.0;

class PointCloud2D {
 public:
  PointCloud2D() = default;
  explicit PointCloud2D(std::vector<Eigen::Vector2d> points);

  const std::vector<Eigen::Vector2d>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  Eigen::Vector2d centroid() const;

 private:
  std::vector<Eigen::Vector2d> points_;
};

/// CSV with header `x,y`.
PointCloud2D parse_point_cloud_csv(const std::string& path);
std::string format_point_cloud_csv(const PointCloud2D& cloud);

/// Static nearest-neighbor index over a 2-D cloud.
class NearestNeighbors2D {
 public:
  explicit NearestNeighbors2D(const PointCloud2D& cloud);
  ~NearestNeighbors2D();
  NearestNeighbors2D(NearestNeighbors2D&&) noexcept;
  NearestNeighbors2D& operator=(NearestNeighbors2D&&) noexcept;

  struct Hit {
    std::size_t index;
    double distance;
  };
  Hit nearest(const Eigen::Vector2d& query) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct MapQualityScore {
  double fitness{0.0};      // fraction of src points with a dst neighbor within inlier_radius
  double inlier_rmse{0.0};  // meters, over the inliers
  RigidTransform transform;
  double inlier_radius{kDefaultInlierRadius};
  int iterations{0};
  /// Mean squared correspondence distance at the start of every iteration.
  std::vector<double> mse_history;
};

/// Coarse alignment: centroids matched, yaw from an exhaustive sweep
/// minimizing the mean nearest-neighbor distance.
RigidTransform global_register(const PointCloud2D& src, const PointCloud2D& dst,
                               double yaw_step_deg = kDefaultYawStepDeg);

/// Point-to-point ICP seeded by global_register, stopping when the
/// correspondence set repeats or after max_iters re-solves.
MapQualityScore icp_fitness(const PointCloud2D& src, const PointCloud2D& dst,
                            double inlier_radius = kDefaultInlierRadius, int max_iters = kDefaultMaxIterations);

nlohmann::json score_to_json(const MapQualityScore& score);

}  // namespace ilseval::align
