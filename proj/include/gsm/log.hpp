#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>

namespace gsm {

namespace detail {

struct WarningLog {
  std::mutex mutex;
  std::function<void(const std::string&)> sink;
  std::atomic<std::uint64_t> count{0};
};

inline WarningLog& warning_log() {
  static WarningLog log;
  return log;
}

}  // namespace detail

/// Replaces the warning sink; an empty function restores the default
/// (stderr, first 10 messages only).
inline void set_warning_sink(std::function<void(const std::string&)> sink) {
  auto& log = detail::warning_log();
  std::lock_guard lock(log.mutex);
  log.sink = std::move(sink);
}

/// Total warnings raised since process start.
inline std::uint64_t warning_count() { return detail::warning_log().count.load(); }

inline void warn(const std::string& message) {
  auto& log = detail::warning_log();
  const auto n = log.count.fetch_add(1) + 1;
  std::lock_guard lock(log.mutex);
  if (log.sink) {
    log.sink(message);
  } else if (n <= 10) {
    std::cerr << "warning: " << message << (n == 10 ? " (further warnings suppressed)" : "") << '\n';
  }
}

}  // namespace gsm
