#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "ilseval/core/model.hpp"
#include "ilseval/dtree/tree.hpp"

namespace ilseval::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ilseval-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline const std::string& cat(const Assignment& a, const std::string& name) { return std::get<std::string>(a.at(name)); }
inline double num(const Assignment& a, const std::string& name) { return std::get<double>(a.at(name)); }

/// Labels of the reference application tree, written
/// as plain conditionals independent of the tree code.
inline std::string application_label(const Assignment& a) {
  if (cat(a, "ILS") == "UWB") {
    if (cat(a, "Environment") == "empty") return "C";
    return cat(a, "EKF") == "on" ? "C" : "D";
  }
  const double mq = num(a, "MapQuality");
  const double fov = num(a, "FoV");
  const bool reflector = cat(a, "Reflector") == "on";
  const bool dynamics = cat(a, "Dynamics") == "yes";
  if (mq < 0.676) {
    if (fov < 225) return "B";
    if (!reflector) return "B";
    return dynamics ? "B" : "A";
  }
  if (fov > 225) return "A";
  if (reflector) return "A";
  return mq < 0.914 ? "B" : "A";
}

/// Labels of the reference technology tree.
inline std::string technology_label(const Assignment& a) {
  if (cat(a, "ILS") == "UWB") {
    const bool ekf = cat(a, "EKF") == "on";
    const bool dynamics = cat(a, "Dynamics") == "yes";
    if (cat(a, "Environment") == "empty") {
      if (ekf) return "III";
      return dynamics ? "IV" : "III";
    }
    if (!ekf) return "V";
    return dynamics ? "IV" : "III";
  }
  const double mq = num(a, "MapQuality");
  const double fov = num(a, "FoV");
  const bool reflector = cat(a, "Reflector") == "on";
  if (mq < 0.676) {
    if (fov < 225) return "II";
    return reflector ? "I" : "II";
  }
  if (fov > 225) return "I";
  if (reflector) return "I";
  return mq < 0.914 ? "II" : "I";
}

/// Child reached from an internal node by a record with factor = value.
inline std::size_t child_for(const dtree::DecisionTree& tree, std::size_t node, const FactorValue& value) {
  const auto& n = tree.node(node);
  return n.split->goes_left(value) ? n.left : n.right;
}

inline const std::string& factor_at(const dtree::DecisionTree& tree, std::size_t node) {
  return tree.node(node).split->factor;
}

inline double threshold_at(const dtree::DecisionTree& tree, std::size_t node) {
  return std::get<dtree::ThresholdTest>(tree.node(node).split->test).threshold;
}

}  // namespace ilseval::testing
