#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hesscov/types.hpp"

namespace hesscov {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

}  // namespace detail

/// Sectioned key = value configuration file. Keys are addressed as
/// "section.key"; values before any section header live under "".
class ConfigFile {
 public:
  static ConfigFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ConfigFile config;
    config.parse(in, path);
    return config;
  }

  static ConfigFile from_string(const std::string& text, const std::string& name = "<string>") {
    std::istringstream in(text);
    ConfigFile config;
    config.parse(in, name);
    return config;
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const { return parse_double(key, get_string(key)); }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  std::int64_t get_int(const std::string& key) const {
    const std::string value = get_string(key);
    try {
      std::size_t pos = 0;
      const std::int64_t parsed = std::stoll(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return parsed;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not an integer: '" + value + "'");
    }
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string value = get_string(key);
    try {
      std::size_t pos = 0;
      const std::uint64_t parsed = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return parsed;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not an unsigned integer: '" + value + "'");
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string value = get_string(key);
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key " + key + ": not a boolean: '" + value + "'");
  }

  std::vector<std::string> get_string_list(const std::string& key) const {
    std::vector<std::string> items;
    std::stringstream ss(get_string(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::trim(item);
      if (!item.empty()) items.push_back(item);
    }
    return items;
  }

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  double parse_double(const std::string& key, const std::string& value) const {
    try {
      std::size_t pos = 0;
      const double parsed = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return parsed;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not a number: '" + value + "'");
    }
  }

  template <typename Stream>
  void parse(Stream& in, const std::string& name) {
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t comment = line.find('#');
      if (comment != std::string::npos) line = line.substr(0, comment);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw ConfigError(name + ":" + std::to_string(lineno) + ": unterminated section header");
        }
        section = detail::trim(line.substr(1, line.size() - 2));
        if (section.empty()) {
          throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
        }
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'key = value', got '" +
                          line + "'");
      }
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
      }
      const std::string full_key = section.empty() ? key : section + "." + key;
      if (entries_.count(full_key) > 0) {
        throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" + full_key +
                          "'");
      }
      entries_[full_key] = value;
    }
  }

  std::map<std::string, std::string> entries_;
};

}  // namespace hesscov
