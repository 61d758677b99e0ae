#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ilseval/align/icp.hpp"
#include "ilseval/categorize/categorize.hpp"
#include "ilseval/ingest/sync.hpp"
#include "ilseval/metrics/metrics.hpp"

namespace ilseval::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct RunConfig {
  std::string manifest;
  std::string out_dir{"ilseval-out"};
  double percentile{metrics::kH95Quantile};
  double max_gap{ingest::kDefaultMaxGap};
  std::string scheme{"both"};  // application | technology | both
  int k_max{categorize::kDefaultKMax};
  double inlier_radius{align::kDefaultInlierRadius};
  int max_iters{align::kDefaultMaxIterations};
  std::optional<std::uint64_t> seed;
  bool strict{false};
  std::string plan;
  std::string map_a;
  std::string map_b;
};

/// Each command returns an exit code: 0 ok, 2 usage or configuration,
/// 3 data. Diagnostics go to err.
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_categorize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_learn(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_map_quality(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ilseval::cli
