#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ilseval/core/model.hpp"

namespace ilseval::ingest {

/// Reads `t,x,y,z[,qw,qx,qy,qz]`. Columns are matched by header name; the
/// quaternion columns are all-or-nothing. The source id is the path.
Trajectory parse_trajectory_csv(const std::string& path);
Trajectory parse_trajectory_text(std::string_view text, const std::string& source_id);

std::string format_trajectory_csv(const Trajectory& trajectory);
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

/// Adds a constant clock offset to every timestamp.
Trajectory shift_time(const Trajectory& trajectory, double offset);

/// Single-column CSV with header `t`; values must be sorted.
std::vector<double> parse_times_csv(const std::string& path);

}  // namespace ilseval::ingest
