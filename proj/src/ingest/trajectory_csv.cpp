#include "ilseval/ingest/trajectory_csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "ilseval/util/text.hpp"

namespace ilseval::ingest {

namespace {

struct Columns {
  std::array<std::size_t, 4> position{};  // t, x, y, z
  std::optional<std::array<std::size_t, 4>> quaternion;
  std::size_t count{0};
};

Columns read_header(std::string_view line, const std::string& source) {
  const auto fields = text::split(line, ',');
  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (text::trim(fields[i]) == name) return i;
    return std::nullopt;
  };
  Columns cols;
  cols.count = fields.size();
  const std::array<std::string_view, 4> pos_names{"t", "x", "y", "z"};
  for (std::size_t i = 0; i < 4; ++i) {
    auto idx = find(pos_names[i]);
    if (!idx) throw ParseError(Errc::MalformedRow, source, 1, "header lacks column '" + std::string(pos_names[i]) + "'");
    cols.position[i] = *idx;
  }
  const std::array<std::string_view, 4> q_names{"qw", "qx", "qy", "qz"};
  std::array<std::optional<std::size_t>, 4> q;
  for (std::size_t i = 0; i < 4; ++i) q[i] = find(q_names[i]);
  const auto present = std::count_if(q.begin(), q.end(), [](const auto& o) { return o.has_value(); });
  if (present == 4) {
    cols.quaternion = std::array<std::size_t, 4>{*q[0], *q[1], *q[2], *q[3]};
  } else if (present != 0) {
    throw ParseError(Errc::MalformedRow, source, 1, "quaternion columns must be qw,qx,qy,qz together");
  }
  return cols;
}

}  // namespace

Trajectory parse_trajectory_text(std::string_view text, const std::string& source_id) {
  const auto lines = text::split(text, '\n');
  std::size_t line_no = 0;
  std::optional<Columns> cols;
  std::vector<Pose> poses;
  for (auto raw : lines) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    if (!cols) {
      cols = read_header(line, source_id);
      continue;
    }
    const auto fields = text::split(line, ',');
    if (fields.size() != cols->count)
      throw ParseError(Errc::MalformedRow, source_id, line_no,
                       "expected " + std::to_string(cols->count) + " fields, found " + std::to_string(fields.size()));
    auto number = [&](std::size_t idx) {
      auto v = text::parse_double(fields[idx]);
      if (!v) throw ParseError(Errc::MalformedRow, source_id, line_no, "bad number '" + std::string(fields[idx]) + "'");
      return *v;
    };
    Pose p;
    p.t = number(cols->position[0]);
    p.x = number(cols->position[1]);
    p.y = number(cols->position[2]);
    p.z = number(cols->position[3]);
    if (cols->quaternion) {
      const auto& q = *cols->quaternion;
      Quaternion quat{number(q[0]), number(q[1]), number(q[2]), number(q[3])};
      if (std::abs(quat.norm() - 1.0) > kQuaternionNormTolerance)
        throw ParseError(Errc::MalformedRow, source_id, line_no, "quaternion is not unit length");
      p.orientation = quat;
    }
    if (!poses.empty() && !(p.t > poses.back().t))
      throw ParseError(Errc::NonMonotoneTimestamp, source_id, line_no,
                       "t=" + text::format_double(p.t) + " does not exceed previous t=" + text::format_double(poses.back().t));
    poses.push_back(p);
  }
  if (!cols) throw ParseError(Errc::EmptyFile, source_id, 0, "no header");
  if (poses.empty()) throw ParseError(Errc::EmptyFile, source_id, line_no, "no data rows");
  return Trajectory(source_id, std::move(poses));
}

Trajectory parse_trajectory_csv(const std::string& path) { return parse_trajectory_text(text::read_file(path), path); }

std::string format_trajectory_csv(const Trajectory& trajectory) {
  const bool with_q = trajectory.has_orientation();
  std::string out = with_q ? "t,x,y,z,qw,qx,qy,qz\n" : "t,x,y,z\n";
  for (const Pose& p : trajectory.poses()) {
    out += text::format_double(p.t);
    for (double v : {p.x, p.y, p.z}) {
      out += ',';
      out += text::format_double(v);
    }
    if (with_q) {
      const auto& q = *p.orientation;
      for (double v : {q.w, q.x, q.y, q.z}) {
        out += ',';
        out += text::format_double(v);
      }
    }
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
  text::write_file(path, format_trajectory_csv(trajectory));
}

Trajectory shift_time(const Trajectory& trajectory, double offset) {
  if (offset == 0.0) return trajectory;
  std::vector<Pose> poses(trajectory.poses().begin(), trajectory.poses().end());
  for (Pose& p : poses) p.t += offset;
  return Trajectory(trajectory.source_id(), std::move(poses));
}

std::vector<double> parse_times_csv(const std::string& path) {
  const std::string contents = text::read_file(path);
  const auto lines = text::split(contents, '\n');
  std::vector<double> times;
  bool header = false;
  std::size_t line_no = 0;
  for (auto raw : lines) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    if (!header) {
      if (line != "t") throw ParseError(Errc::MalformedRow, path, line_no, "expected header 't'");
      header = true;
      continue;
    }
    auto v = text::parse_double(line);
    if (!v) throw ParseError(Errc::MalformedRow, path, line_no, "bad number '" + std::string(line) + "'");
    if (!times.empty() && *v < times.back())
      throw ParseError(Errc::NonMonotoneTimestamp, path, line_no, "evaluation times must be sorted");
    times.push_back(*v);
  }
  if (!header) throw ParseError(Errc::EmptyFile, path, 0, "no header");
  return times;
}

}  // namespace ilseval::ingest
