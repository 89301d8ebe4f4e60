#pragma once

#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <string>

namespace hesscov::log {

enum class Level { off = 0, error = 1, warn = 2, info = 3, debug = 4 };

/// Log level from the HESSCOV_LOG environment variable (default: warn).
inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("HESSCOV_LOG");
    if (env == nullptr) return Level::warn;
    const std::string v(env);
    if (v == "off") return Level::off;
    if (v == "error") return Level::error;
    if (v == "warn") return Level::warn;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
  }();
  return level;
}

inline bool enabled(Level level) {
  return static_cast<int>(level) <= static_cast<int>(threshold());
}

namespace detail {

inline std::mutex& mutex() {
  static std::mutex m;
  return m;
}

template <typename... Args>
void write(Level level, const char* tag, const Args&... args) {
  if (!enabled(level)) return;
  std::ostringstream oss;
  (oss << ... << args);
  const std::lock_guard<std::mutex> lock(mutex());
  std::fprintf(stderr, "[hesscov %s] %s\n", tag, oss.str().c_str());
}

}  // namespace detail

template <typename... Args>
void error(const Args&... args) {
  detail::write(Level::error, "error", args...);
}

template <typename... Args>
void warn(const Args&... args) {
  detail::write(Level::warn, "warn", args...);
}

template <typename... Args>
void info(const Args&... args) {
  detail::write(Level::info, "info", args...);
}

template <typename... Args>
void debug(const Args&... args) {
  detail::write(Level::debug, "debug", args...);
}

}  // namespace hesscov::log
