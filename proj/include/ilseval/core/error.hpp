#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ilseval {

enum class Errc {
  // schema / manifest / configuration
  UnknownFactor,
  MissingFactor,
  ValueOutOfDomain,
  DuplicateScenarioId,
  InvalidSchema,
  SchemaError,
  InvalidArgument,
  InvalidK,
  InvalidPlan,
  InfeasibleRange,
  InvalidTree,
  UnknownCategoricalValue,
  // data
  FileNotFound,
  EmptyFile,
  MalformedRow,
  NonMonotoneTimestamp,
  OutOfRange,
  GapTooLarge,
  EmptyEvaluationSet,
  EmptyInput,
  MissingRepetitions,
  TooFewCurves,
  DegenerateConfiguration,
};

std::string_view to_string(Errc code) noexcept;

/// True for codes caused by user configuration (manifest, plan, flags)
/// rather than by the contents of data files.
bool is_config_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// A row-level problem in a text file.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::string path, std::size_t line, const std::string& detail);

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

struct Violation {
  Errc code;
  std::string where;  // JSON-path style locator, e.g. $.scenarios[2].assignment.FoV
  std::string message;
};

/// Collects every violation found while validating a manifest. code() is
/// the code of the first violation.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }
  bool contains(Errc code) const noexcept;

 private:
  std::vector<Violation> violations_;
};

}  // namespace ilseval
