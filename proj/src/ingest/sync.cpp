#include "ilseval/ingest/sync.hpp"

#include <algorithm>
#include <cmath>

#include "ilseval/util/text.hpp"

namespace ilseval::ingest {

SyncError::SyncError(Errc code, std::size_t index, const std::string& detail)
    : Error(code, "evaluation index " + std::to_string(index) + ": " + detail), index_(index) {}

Quaternion slerp(const Quaternion& a, const Quaternion& b, double fraction) {
  double dot = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  Quaternion end = b;
  if (dot < 0.0) {  // shortest arc
    dot = -dot;
    end = {-b.w, -b.x, -b.y, -b.z};
  }
  double wa = 1.0 - fraction;
  double wb = fraction;
  if (dot < 0.9995) {
    const double theta = std::acos(std::clamp(dot, -1.0, 1.0));
    const double s = std::sin(theta);
    wa = std::sin((1.0 - fraction) * theta) / s;
    wb = std::sin(fraction * theta) / s;
  }
  Quaternion q{wa * a.w + wb * end.w, wa * a.x + wb * end.x, wa * a.y + wb * end.y, wa * a.z + wb * end.z};
  const double n = q.norm();
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Pose interpolate_at(const Trajectory& trajectory, double t, double max_gap) {
  const auto poses = trajectory.poses();
  if (poses.empty() || !(t >= poses.front().t && t <= poses.back().t)) {
    const std::string span = poses.empty() ? "empty trajectory"
                                           : "[" + text::format_double(poses.front().t) + ", " +
                                                 text::format_double(poses.back().t) + "]";
    throw Error(Errc::OutOfRange, "t=" + text::format_double(t) + " outside " + span + " of " + trajectory.source_id());
  }
  auto upper = std::lower_bound(poses.begin(), poses.end(), t, [](const Pose& p, double v) { return p.t < v; });
  if (upper->t == t) return *upper;
  const Pose& hi = *upper;
  const Pose& lo = *(upper - 1);
  const double gap = hi.t - lo.t;
  if (gap > max_gap)
    throw Error(Errc::GapTooLarge, "bracketing interval " + text::format_double(gap) + " s exceeds max_gap " +
                                       text::format_double(max_gap) + " s in " + trajectory.source_id());
  const double f = (t - lo.t) / gap;
  Pose out;
  out.t = t;
  out.x = lo.x + f * (hi.x - lo.x);
  out.y = lo.y + f * (hi.y - lo.y);
  out.z = lo.z + f * (hi.z - lo.z);
  if (lo.orientation && hi.orientation) out.orientation = slerp(*lo.orientation, *hi.orientation, f);
  return out;
}

std::vector<SyncedPosePair> sync_poses(const ExperimentRecord& record, double max_gap) {
  if (record.evaluation_times.empty())
    throw Error(Errc::EmptyEvaluationSet, record.scenario_id + " repetition " + std::to_string(record.repetition));
  std::vector<SyncedPosePair> out;
  out.reserve(record.evaluation_times.size());
  for (std::size_t i = 0; i < record.evaluation_times.size(); ++i) {
    const double t = record.evaluation_times[i];
    try {
      out.push_back({t, interpolate_at(record.estimate, t, max_gap), interpolate_at(record.reference, t, max_gap)});
    } catch (const Error& e) {
      throw SyncError(e.code(), i, e.what());
    }
  }
  return out;
}

std::vector<SyncedSamplePair> sync_pairs(const ExperimentRecord& record, double max_gap) {
  const auto poses = sync_poses(record, max_gap);
  std::vector<SyncedSamplePair> out;
  out.reserve(poses.size());
  for (const auto& p : poses)
    out.push_back({p.t, {p.estimate.x, p.estimate.y}, {p.reference.x, p.reference.y}});
  return out;
}

}  // namespace ilseval::ingest
