#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdg::csv {

/// Header plus data rows of a comma-separated file. No quoting support beyond
/// stripping a surrounding pair of double quotes from a field.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line number in the source file for each row.
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(std::string_view name) const;
};

std::vector<std::string> split_line(std::string_view line);

/// Throws FileNotFound. Skips blank lines; strips a UTF-8 BOM and trailing CR.
Table read(const std::filesystem::path& path);

/// Fixed 6-decimal formatting used for every numeric CSV artifact.
std::string fixed6(double value);
std::string fixed(double value, int decimals);

/// Parses a double; rejects trailing garbage. Empty or "NA"/"nan" yields nullopt via `missing`.
std::optional<double> parse_double(std::string_view field, bool& missing);

}  // namespace sdg::csv
