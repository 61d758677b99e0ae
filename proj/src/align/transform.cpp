#include "ilseval/align/transform.hpp"

#include <cmath>

namespace ilseval::align {

Eigen::Vector2d RigidTransform::apply(const Eigen::Vector2d& p) const {
  const Eigen::Vector3d q = apply(Eigen::Vector3d(p.x(), p.y(), 0.0));
  return {q.x(), q.y()};
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.scale = 1.0 / scale;
  inv.translation = -(inv.rotation * translation) / scale;
  return inv;
}

RigidTransform RigidTransform::compose(const RigidTransform& inner) const {
  RigidTransform out;
  out.rotation = rotation * inner.rotation;
  out.scale = scale * inner.scale;
  out.translation = scale * (rotation * inner.translation) + translation;
  return out;
}

double RigidTransform::yaw() const { return std::atan2(rotation(1, 0), rotation(0, 0)); }

RigidTransform RigidTransform::planar(double yaw, const Eigen::Vector2d& translation) {
  RigidTransform tf;
  tf.rotation = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  tf.translation = {translation.x(), translation.y(), 0.0};
  return tf;
}

void check_transform(const RigidTransform& tf) {
  const double ortho = (tf.rotation.transpose() * tf.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (!(ortho <= kRotationTolerance)) throw Error(Errc::InvalidArgument, "rotation is not orthonormal");
  if (!(std::abs(tf.rotation.determinant() - 1.0) <= kRotationTolerance))
    throw Error(Errc::InvalidArgument, "rotation determinant is not +1");
  if (!(tf.scale > 0.0) || !std::isfinite(tf.scale)) throw Error(Errc::InvalidArgument, "scale must be positive");
  if (!tf.translation.allFinite()) throw Error(Errc::InvalidArgument, "translation is not finite");
}

Trajectory apply_transform(const RigidTransform& tf, const Trajectory& trajectory) {
  std::vector<Pose> poses;
  poses.reserve(trajectory.size());
  const Eigen::Quaterniond qr(tf.rotation);
  for (const Pose& p : trajectory.poses()) {
    const Eigen::Vector3d q = tf.apply(Eigen::Vector3d(p.x, p.y, p.z));
    Pose out{p.t, q.x(), q.y(), q.z(), std::nullopt};
    if (p.orientation) {
      const auto& o = *p.orientation;
      Eigen::Quaterniond r = qr * Eigen::Quaterniond(o.w, o.x, o.y, o.z);
      r.normalize();
      out.orientation = Quaternion{r.w(), r.x(), r.y(), r.z()};
    }
    poses.push_back(out);
  }
  return Trajectory(trajectory.source_id(), std::move(poses));
}

nlohmann::json transform_to_json(const RigidTransform& tf) {
  nlohmann::json j;
  std::vector<double> rot;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot.push_back(tf.rotation(r, c));
  j["rotation"] = rot;
  j["translation"] = {tf.translation.x(), tf.translation.y(), tf.translation.z()};
  j["scale"] = tf.scale;
  return j;
}

RigidTransform transform_from_json(const nlohmann::json& j) {
  RigidTransform tf;
  try {
    const auto rot = j.at("rotation").get<std::vector<double>>();
    const auto t = j.at("translation").get<std::vector<double>>();
    if (rot.size() != 9 || t.size() != 3) throw Error(Errc::SchemaError, "transform needs 9 rotation and 3 translation entries");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) tf.rotation(r, c) = rot[static_cast<std::size_t>(r * 3 + c)];
    tf.translation = {t[0], t[1], t[2]};
    tf.scale = j.value("scale", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("transform: ") + e.what());
  }
  check_transform(tf);
  return tf;
}

}  // namespace ilseval::align
