#include "ilseval/core/error.hpp"

#include <algorithm>

namespace ilseval {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::UnknownFactor: return "UnknownFactor";
    case Errc::MissingFactor: return "MissingFactor";
    case Errc::ValueOutOfDomain: return "ValueOutOfDomain";
    case Errc::DuplicateScenarioId: return "DuplicateScenarioId";
    case Errc::InvalidSchema: return "InvalidSchema";
    case Errc::SchemaError: return "SchemaError";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidK: return "InvalidK";
    case Errc::InvalidPlan: return "InvalidPlan";
    case Errc::InfeasibleRange: return "InfeasibleRange";
    case Errc::InvalidTree: return "InvalidTree";
    case Errc::UnknownCategoricalValue: return "UnknownCategoricalValue";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::NonMonotoneTimestamp: return "NonMonotoneTimestamp";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::GapTooLarge: return "GapTooLarge";
    case Errc::EmptyEvaluationSet: return "EmptyEvaluationSet";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::MissingRepetitions: return "MissingRepetitions";
    case Errc::TooFewCurves: return "TooFewCurves";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
  }
  return "Unknown";
}

bool is_config_error(Errc code) noexcept {
  switch (code) {
    case Errc::UnknownFactor:
    case Errc::MissingFactor:
    case Errc::ValueOutOfDomain:
    case Errc::DuplicateScenarioId:
    case Errc::InvalidSchema:
    case Errc::SchemaError:
    case Errc::InvalidArgument:
    case Errc::InvalidK:
    case Errc::InvalidPlan:
    case Errc::InfeasibleRange:
    case Errc::InvalidTree:
    case Errc::UnknownCategoricalValue:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(Errc code, std::string path, std::size_t line, const std::string& detail)
    : Error(code, path + ":" + std::to_string(line) + ": " + detail), path_(std::move(path)), line_(line) {}

namespace {
std::string join_violations(const std::vector<Violation>& violations) {
  std::string out = std::to_string(violations.size()) + " violation(s)";
  for (const auto& v : violations) {
    out += "\n  ";
    out += to_string(v.code);
    out += " at ";
    out += v.where;
    out += ": ";
    out += v.message;
  }
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? Errc::InvalidSchema : violations.front().code, join_violations(violations)),
      violations_(std::move(violations)) {}

bool ValidationError::contains(Errc code) const noexcept {
  return std::any_of(violations_.begin(), violations_.end(), [code](const Violation& v) { return v.code == code; });
}

}  // namespace ilseval
