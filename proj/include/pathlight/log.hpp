#pragma once

#include <string>

namespace pathlight {

enum class LogLevel { Debug, Info, Warn, Error };

/// Minimum level that gets written; defaults to Info.
void set_log_level(LogLevel level);

/// One line to stderr: "2026-01-05T12:00:00Z [warn] parse_error: detail".
/// Thread-safe; concurrent lines never interleave.
void log_line(LogLevel level, const std::string& event,
              const std::string& detail);

inline void log_debug(const std::string& event, const std::string& detail) {
  log_line(LogLevel::Debug, event, detail);
}
inline void log_info(const std::string& event, const std::string& detail) {
  log_line(LogLevel::Info, event, detail);
}
inline void log_warn(const std::string& event, const std::string& detail) {
  log_line(LogLevel::Warn, event, detail);
}
inline void log_error(const std::string& event, const std::string& detail) {
  log_line(LogLevel::Error, event, detail);
}

}  // namespace pathlight
