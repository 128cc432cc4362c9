#include "pathlight/log.hpp"

#include <atomic>
#include <cstdio>
#include <ctime>
#include <mutex>

namespace pathlight {

namespace {

std::atomic<LogLevel> g_level{LogLevel::Info};
std::mutex g_mutex;

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::Debug: return "debug";
    case LogLevel::Info: return "info";
    case LogLevel::Warn: return "warn";
    case LogLevel::Error: return "error";
  }
  return "?";
}

}  // namespace

void set_log_level(LogLevel level) { g_level.store(level); }

void log_line(LogLevel level, const std::string& event,
              const std::string& detail) {
  if (level < g_level.load()) return;

  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "%s [%s] %s: %s\n", stamp, level_name(level),
               event.c_str(), detail.c_str());
  std::fflush(stderr);
}

}  // namespace pathlight
