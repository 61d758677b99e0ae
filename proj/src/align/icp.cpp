#include "ilseval/align/icp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "ilseval/align/umeyama.hpp"
#include "ilseval/util/text.hpp"

namespace ilseval::align {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

PointCloud2D::PointCloud2D(std::vector<Eigen::Vector2d> points) : points_(std::move(points)) {
  for (const auto& p : points_)
    if (!p.allFinite()) throw Error(Errc::InvalidArgument, "point cloud contains a non-finite point");
}

Eigen::Vector2d PointCloud2D::centroid() const {
  if (points_.empty()) throw Error(Errc::EmptyInput, "empty point cloud");
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : points_) c += p;
  return c / static_cast<double>(points_.size());
}

PointCloud2D parse_point_cloud_csv(const std::string& path) {
  const std::string contents = text::read_file(path);
  std::vector<Eigen::Vector2d> points;
  bool header = false;
  std::size_t line_no = 0;
  for (auto raw : text::split(contents, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    const auto fields = text::split(line, ',');
    if (!header) {
      if (fields.size() != 2 || text::trim(fields[0]) != "x" || text::trim(fields[1]) != "y")
        throw ParseError(Errc::MalformedRow, path, line_no, "expected header 'x,y'");
      header = true;
      continue;
    }
    if (fields.size() != 2) throw ParseError(Errc::MalformedRow, path, line_no, "expected 2 fields");
    auto x = text::parse_double(fields[0]);
    auto y = text::parse_double(fields[1]);
    if (!x || !y) throw ParseError(Errc::MalformedRow, path, line_no, "bad number");
    points.emplace_back(*x, *y);
  }
  if (!header || points.empty()) throw ParseError(Errc::EmptyFile, path, line_no, "no points");
  return PointCloud2D(std::move(points));
}

std::string format_point_cloud_csv(const PointCloud2D& cloud) {
  std::string out = "x,y\n";
  for (const auto& p : cloud.points()) out += text::format_double(p.x()) + "," + text::format_double(p.y()) + "\n";
  return out;
}

struct NearestNeighbors2D::Impl {
  using Point = bg::model::point<double, 2, bg::cs::cartesian>;
  using Value = std::pair<Point, std::size_t>;
  bgi::rtree<Value, bgi::rstar<16>> tree;
  std::vector<Eigen::Vector2d> points;
};

NearestNeighbors2D::NearestNeighbors2D(const PointCloud2D& cloud) : impl_(std::make_unique<Impl>()) {
  if (cloud.size() == 0) throw Error(Errc::EmptyInput, "empty point cloud");
  std::vector<Impl::Value> values;
  values.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    values.emplace_back(Impl::Point(cloud.points()[i].x(), cloud.points()[i].y()), i);
  impl_->tree = decltype(impl_->tree)(values.begin(), values.end());
  impl_->points = cloud.points();
}

NearestNeighbors2D::~NearestNeighbors2D() = default;
NearestNeighbors2D::NearestNeighbors2D(NearestNeighbors2D&&) noexcept = default;
NearestNeighbors2D& NearestNeighbors2D::operator=(NearestNeighbors2D&&) noexcept = default;

NearestNeighbors2D::Hit NearestNeighbors2D::nearest(const Eigen::Vector2d& query) const {
  Impl::Value hit;
  impl_->tree.query(bgi::nearest(Impl::Point(query.x(), query.y()), 1), &hit);
  return {hit.second, (impl_->points[hit.second] - query).norm()};
}

namespace {

void require_registrable(const PointCloud2D& cloud, const char* name) {
  if (cloud.size() < 3)
    throw Error(Errc::DegenerateConfiguration, std::string(name) + " cloud needs at least 3 points");
  const Eigen::Vector2d c = cloud.centroid();
  double spread = 0.0;
  for (const auto& p : cloud.points()) spread = std::max(spread, (p - c).norm());
  if (!(spread > 0.0)) throw Error(Errc::DegenerateConfiguration, std::string(name) + " cloud is a single point");
}

}  // namespace

RigidTransform global_register(const PointCloud2D& src, const PointCloud2D& dst, double yaw_step_deg) {
  require_registrable(src, "source");
  require_registrable(dst, "target");
  if (!(yaw_step_deg > 0.0 && yaw_step_deg <= 360.0)) throw Error(Errc::InvalidArgument, "yaw step must be in (0, 360]");
  const NearestNeighbors2D index(dst);
  const Eigen::Vector2d cs = src.centroid();
  const Eigen::Vector2d cd = dst.centroid();
  const int steps = static_cast<int>(std::floor(360.0 / yaw_step_deg + 1e-9));

  double best_cost = std::numeric_limits<double>::infinity();
  double best_yaw = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double yaw = k * yaw_step_deg * std::numbers::pi / 180.0;
    const Eigen::Rotation2Dd rot(yaw);
    double sum = 0.0;
    for (const auto& p : src.points()) sum += index.nearest(rot * (p - cs) + cd).distance;
    const double cost = sum / static_cast<double>(src.size());
    if (cost < best_cost) {
      best_cost = cost;
      best_yaw = yaw;
    }
  }
  const Eigen::Rotation2Dd rot(best_yaw);
  return RigidTransform::planar(best_yaw, cd - rot * cs);
}

MapQualityScore icp_fitness(const PointCloud2D& src, const PointCloud2D& dst, double inlier_radius, int max_iters) {
  if (!(inlier_radius > 0.0)) throw Error(Errc::InvalidArgument, "inlier radius must be positive");
  if (max_iters < 0) throw Error(Errc::InvalidArgument, "max_iters must be non-negative");
  MapQualityScore score;
  score.inlier_radius = inlier_radius;
  score.transform = global_register(src, dst);
  const NearestNeighbors2D index(dst);

  const std::size_t n = src.size();
  std::vector<std::size_t> matches(n);
  std::vector<std::size_t> previous;
  std::vector<Eigen::Vector2d> matched(n);
  std::vector<double> distances(n);

  auto correspond = [&](const RigidTransform& tf) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto hit = index.nearest(tf.apply(src.points()[i]));
      matches[i] = hit.index;
      distances[i] = hit.distance;
      sum += hit.distance * hit.distance;
    }
    return sum / static_cast<double>(n);
  };

  for (int it = 0; it < max_iters; ++it) {
    score.mse_history.push_back(correspond(score.transform));
    if (matches == previous) break;
    previous = matches;
    for (std::size_t i = 0; i < n; ++i) matched[i] = dst.points()[matches[i]];
    score.transform = umeyama_align_2d(src.points(), matched, false);
    score.iterations = it + 1;
  }
  correspond(score.transform);

  std::size_t inliers = 0;
  double sum_sq = 0.0;
  for (double d : distances) {
    if (d <= inlier_radius) {
      ++inliers;
      sum_sq += d * d;
    }
  }
  score.fitness = static_cast<double>(inliers) / static_cast<double>(n);
  score.inlier_rmse = inliers == 0 ? 0.0 : std::sqrt(sum_sq / static_cast<double>(inliers));
  return score;
}

nlohmann::json score_to_json(const MapQualityScore& score) {
  nlohmann::json j;
  j["fitness"] = score.fitness;
  j["inlier_rmse"] = score.inlier_rmse;
  j["inlier_radius"] = score.inlier_radius;
  j["iterations"] = score.iterations;
  j["transform"] = transform_to_json(score.transform);
  return j;
}

}  // namespace ilseval::align
