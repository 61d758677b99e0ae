#pragma once

#include <span>

#include <Eigen/Dense>

#include "ilseval/align/transform.hpp"

namespace ilseval::align {

/// Least-squares similarity transform minimizing
/// sum |dst_i - (c R src_i + t)|^2 over rotations with det +1.
/// with_scale = false fixes c = 1. Needs >= 3 correspondences whose
/// cross-covariance has rank >= 2; collinear or coincident sets throw
/// DegenerateConfiguration.
RigidTransform umeyama_align(std::span<const Eigen::Vector3d> src, std::span<const Eigen::Vector3d> dst,
                             bool with_scale = false);

/// Planar variant (rank >= 1 suffices), returned embedded in 3-D.
RigidTransform umeyama_align_2d(std::span<const Eigen::Vector2d> src, std::span<const Eigen::Vector2d> dst,
                                bool with_scale = false);

/// Root-mean-square of |dst_i - tf(src_i)|.
double alignment_rmse(const RigidTransform& tf, std::span<const Eigen::Vector3d> src,
                      std::span<const Eigen::Vector3d> dst);

}  // namespace ilseval::align
