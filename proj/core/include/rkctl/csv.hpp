#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rkctl::csv {

/// %.17g, which round-trips every finite double.
[[nodiscard]] std::string format(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  /// Convenience for all-numeric rows.
  void add_numbers(const std::vector<double>& row);
  [[nodiscard]] std::string to_string() const;
};

/// Parses comma-separated text with a header line; no quoting.
[[nodiscard]] Table parse(std::string_view text);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

}  // namespace rkctl::csv
