#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include "ilseval/core/model.hpp"

namespace ilseval::align {

/// Similarity transform p -> scale * rotation * p + translation. Planar
/// (2-D) transforms are embedded as rotations about z.
struct RigidTransform {
  Eigen::Matrix3d rotation{Eigen::Matrix3d::Identity()};
  Eigen::Vector3d translation{Eigen::Vector3d::Zero()};
  double scale{1.0};

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return scale * (rotation * p) + translation; }
  Eigen::Vector2d apply(const Eigen::Vector2d& p) const;
  RigidTransform inverse() const;
  /// (*this) after inner.
  RigidTransform compose(const RigidTransform& inner) const;
  /// Yaw of the rotation about z, in radians.
  double yaw() const;

  static RigidTransform planar(double yaw, const Eigen::Vector2d& translation);
};

inline constexpr double kRotationTolerance = 1e-9;

/// Throws InvalidArgument unless rotation is orthonormal with det +1 and scale > 0.
void check_transform(const RigidTransform& tf);

/// Positions map through the transform, timestamps are kept and
/// orientations are left-composed with the rotation.
Trajectory apply_transform(const RigidTransform& tf, const Trajectory& trajectory);

/// Rotation, translation and scale; rotation row-major.
nlohmann::json transform_to_json(const RigidTransform& tf);
RigidTransform transform_from_json(const nlohmann::json& j);

}  // namespace ilseval::align
