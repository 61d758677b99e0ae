#include "ilseval/align/umeyama.hpp"

#include <cmath>

namespace ilseval::align {

namespace {

// Singular values below this fraction of the largest count as zero.
constexpr double kRankTolerance = 1e-10;

template <int D>
struct Fit {
  Eigen::Matrix<double, D, D> rotation;
  Eigen::Matrix<double, D, 1> translation;
  double scale;
};

template <int D>
Fit<D> umeyama(std::span<const Eigen::Matrix<double, D, 1>> src, std::span<const Eigen::Matrix<double, D, 1>> dst,
               bool with_scale, std::size_t min_points) {
  using Vec = Eigen::Matrix<double, D, 1>;
  using Mat = Eigen::Matrix<double, D, D>;
  if (src.size() != dst.size()) throw Error(Errc::InvalidArgument, "point sets differ in size");
  if (src.size() < min_points)
    throw Error(Errc::DegenerateConfiguration, "need at least " + std::to_string(min_points) + " correspondences");
  for (std::size_t i = 0; i < src.size(); ++i)
    if (!src[i].allFinite() || !dst[i].allFinite()) throw Error(Errc::InvalidArgument, "non-finite point");

  const double n = static_cast<double>(src.size());
  Vec mean_src = Vec::Zero();
  Vec mean_dst = Vec::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    mean_src += src[i];
    mean_dst += dst[i];
  }
  mean_src /= n;
  mean_dst /= n;

  double var_src = 0.0;
  Mat sigma = Mat::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec a = src[i] - mean_src;
    const Vec b = dst[i] - mean_dst;
    var_src += a.squaredNorm();
    sigma += b * a.transpose();
  }
  var_src /= n;
  sigma /= n;

  Eigen::JacobiSVD<Mat> svd(sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  if (!(var_src > 0.0) || !(sv(0) > 0.0)) throw Error(Errc::DegenerateConfiguration, "point set is coincident");
  int rank = 0;
  for (int i = 0; i < D; ++i)
    if (sv(i) > kRankTolerance * sv(0)) ++rank;
  if (rank < D - 1)
    throw Error(Errc::DegenerateConfiguration,
                "cross-covariance rank " + std::to_string(rank) + " < " + std::to_string(D - 1) + " (collinear points?)");

  const Mat& u = svd.matrixU();
  const Mat& v = svd.matrixV();
  Vec s = Vec::Ones();
  if (u.determinant() * v.determinant() < 0.0) s(D - 1) = -1.0;

  Fit<D> fit;
  fit.rotation = u * s.asDiagonal() * v.transpose();
  fit.scale = with_scale ? sv.dot(s) / var_src : 1.0;
  fit.translation = mean_dst - fit.scale * fit.rotation * mean_src;
  return fit;
}

}  // namespace

RigidTransform umeyama_align(std::span<const Eigen::Vector3d> src, std::span<const Eigen::Vector3d> dst,
                             bool with_scale) {
  const auto fit = umeyama<3>(src, dst, with_scale, 3);
  RigidTransform tf;
  tf.rotation = fit.rotation;
  tf.translation = fit.translation;
  tf.scale = fit.scale;
  return tf;
}

RigidTransform umeyama_align_2d(std::span<const Eigen::Vector2d> src, std::span<const Eigen::Vector2d> dst,
                                bool with_scale) {
  const auto fit = umeyama<2>(src, dst, with_scale, 2);
  RigidTransform tf;
  tf.rotation.topLeftCorner<2, 2>() = fit.rotation;
  tf.translation.head<2>() = fit.translation;
  tf.scale = fit.scale;
  return tf;
}

double alignment_rmse(const RigidTransform& tf, std::span<const Eigen::Vector3d> src,
                      std::span<const Eigen::Vector3d> dst) {
  if (src.empty() || src.size() != dst.size()) throw Error(Errc::InvalidArgument, "point sets must be non-empty and equal in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) sum += (dst[i] - tf.apply(src[i])).squaredNorm();
  return std::sqrt(sum / static_cast<double>(src.size()));
}

}  // namespace ilseval::align
