#include "rkctl/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rkctl/errors.hpp"

namespace rkctl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("config key '" + std::string(key) + "': '" + std::string(text) +
                      "' is not a number");
  return v;
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ',' && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Config Config::parse(std::string_view text, std::string_view origin) {
  Config cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto comment = line.find_first_of("#;");
    line = trim(line.substr(0, comment));
    if (line.empty()) continue;
    const auto where = std::string(origin) + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    const auto value = trim(line.substr(eq + 1));
    cfg.set(section.empty() ? std::string(key) : section + "." + std::string(key),
            std::string(value));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void Config::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty())
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

std::optional<std::string> Config::find(std::string_view key, std::string_view section) const {
  if (!section.empty()) {
    const auto it = values_.find(std::string(section) + "." + std::string(key));
    if (it != values_.end()) return it->second;
  }
  const auto it = values_.find(std::string(key));
  if (it != values_.end()) return it->second;
  return std::nullopt;
}

bool Config::has(std::string_view key, std::string_view section) const {
  return find(key, section).has_value();
}

std::string Config::get_string(std::string_view key, std::string_view section,
                               std::string fallback) const {
  auto v = find(key, section);
  return v ? *v : std::move(fallback);
}

double Config::get_double(std::string_view key, std::string_view section, double fallback) const {
  const auto v = find(key, section);
  return v ? to_double(key, *v) : fallback;
}

int Config::get_int(std::string_view key, std::string_view section, int fallback) const {
  const auto v = find(key, section);
  if (!v) return fallback;
  int out = 0;
  const auto* end = v->data() + v->size();
  const auto [ptr, ec] = std::from_chars(v->data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("config key '" + std::string(key) + "': '" + *v + "' is not an integer");
  return out;
}

bool Config::get_bool(std::string_view key, std::string_view section, bool fallback) const {
  const auto v = find(key, section);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError("config key '" + std::string(key) + "': '" + *v + "' is not a boolean");
}

std::vector<double> Config::get_list(std::string_view key, std::string_view section,
                                     std::vector<double> fallback) const {
  const auto v = find(key, section);
  if (!v) return fallback;
  std::vector<double> out;
  for (auto w : split_words(*v)) out.push_back(to_double(key, w));
  return out;
}

std::vector<std::string> Config::get_words(std::string_view key, std::string_view section,
                                           std::vector<std::string> fallback) const {
  const auto v = find(key, section);
  if (!v) return fallback;
  std::vector<std::string> out;
  for (auto w : split_words(*v)) out.emplace_back(w);
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Config::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

}  // namespace rkctl
