#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ilseval::text {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);

/// Parses the whole field as a finite double; nullopt otherwise.
std::optional<double> parse_double(std::string_view field) noexcept;

/// Reads a file into memory; throws Error(FileNotFound) if it cannot be opened.
std::string read_file(const std::string& path);
/// Writes bytes verbatim (LF line endings are the caller's responsibility).
void write_file(const std::string& path, std::string_view contents);

}  // namespace ilseval::text
