#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rkctl {

/// Flat key=value configuration with optional [section] headers. A key
/// inside a section is stored as "section.key"; lookups in a section fall
/// back to the unqualified key. '#' and ';' start comments.
class Config {
 public:
  Config() = default;

  /// Throws ConfigError with the line number on malformed input.
  static Config parse(std::string_view text, std::string_view origin = "<string>");
  /// Throws IoError when the file cannot be read.
  static Config load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  /// Applies "key=value" (key may be "section.key").
  void apply_override(std::string_view assignment);

  [[nodiscard]] bool has(std::string_view key, std::string_view section = {}) const;
  [[nodiscard]] std::optional<std::string> find(std::string_view key,
                                                std::string_view section = {}) const;

  [[nodiscard]] std::string get_string(std::string_view key, std::string_view section,
                                       std::string fallback) const;
  [[nodiscard]] double get_double(std::string_view key, std::string_view section,
                                  double fallback) const;
  [[nodiscard]] int get_int(std::string_view key, std::string_view section, int fallback) const;
  [[nodiscard]] bool get_bool(std::string_view key, std::string_view section, bool fallback) const;
  /// Comma- or whitespace-separated numbers.
  [[nodiscard]] std::vector<double> get_list(std::string_view key, std::string_view section,
                                             std::vector<double> fallback) const;
  /// Comma- or whitespace-separated words.
  [[nodiscard]] std::vector<std::string> get_words(std::string_view key, std::string_view section,
                                                   std::vector<std::string> fallback) const;

  /// Sorted "key=value" lines; identical configurations give identical text.
  [[nodiscard]] std::string canonical() const;
  /// 64-bit FNV-1a hash of canonical(), as 16 hex digits.
  [[nodiscard]] std::string hash() const;

  [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept {
    return values_;
  }

 private:
  std::map<std::string, std::string> values_;
};

[[nodiscard]] std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace rkctl
