#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ilseval/core/model.hpp"

namespace ilseval::ingest {

inline constexpr double kDefaultMaxGap = 0.1;  // seconds

struct SyncedSamplePair {
  double t{0.0};
  std::array<double, 2> estimate_xy{};
  std::array<double, 2> reference_xy{};
};

struct SyncedPosePair {
  double t{0.0};
  Pose estimate;
  Pose reference;
};

/// An interpolation failure at one evaluation time. code() is the
/// underlying OutOfRange / GapTooLarge.
class SyncError : public Error {
 public:
  SyncError(Errc code, std::size_t index, const std::string& detail);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Pose at time t. Position is linear between the bracketing samples and
/// orientation is slerped when both carry one. A query that hits a sample
/// time returns that sample unchanged. Throws OutOfRange outside
/// [first, last] and GapTooLarge when the bracketing interval exceeds max_gap.
Pose interpolate_at(const Trajectory& trajectory, double t, double max_gap = kDefaultMaxGap);

Quaternion slerp(const Quaternion& a, const Quaternion& b, double fraction);

/// One pose pair per evaluation time; throws EmptyEvaluationSet or SyncError.
std::vector<SyncedPosePair> sync_poses(const ExperimentRecord& record, double max_gap = kDefaultMaxGap);
std::vector<SyncedSamplePair> sync_pairs(const ExperimentRecord& record, double max_gap = kDefaultMaxGap);

}  // namespace ilseval::ingest
