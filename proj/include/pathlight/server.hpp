#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pathlight/path_io.hpp"

namespace pathlight {

struct PathSnapshot {
  std::uint64_t version = 0;  // publish order, 1-based
  PathMessage message;
};

/// Single-value handoff between the network readers and the render loop.
/// There is no queue: a new path replaces the old one, so a slow consumer
/// skips straight to the newest path (latest-wins). After close(), waiters
/// still drain a not-yet-consumed value before seeing end-of-stream.
class LatestPathSlot {
 public:
  void publish(PathMessage message);

  /// Block until a version newer than `last_version` is available or the
  /// slot is closed and drained; nullopt means end-of-stream.
  std::optional<PathSnapshot> wait_newer(std::uint64_t last_version);

  /// Newest value so far without blocking; nullopt if nothing published yet.
  std::optional<PathSnapshot> latest() const;

  void close();

 private:
  mutable std::mutex mutex_;
  std::condition_variable cond_;
  PathMessage message_;
  std::uint64_t version_ = 0;
  bool closed_ = false;
};

struct ServerStats {
  std::uint64_t connections = 0;
  std::uint64_t records_accepted = 0;
  std::uint64_t records_rejected = 0;
};

/// TCP listener for newline-delimited path records. Each line is parsed as a
/// PathMessage and published to the slot; malformed lines are logged and
/// skipped without dropping the connection. Explicit "seq" values must
/// strictly increase per connection; records without one get the next
/// per-connection sequence number. Lines longer than 16 MiB drop the
/// connection (runaway input, not a record).
class IngestServer {
 public:
  /// Resolves and binds immediately so a bad address fails fast; port 0
  /// picks an ephemeral port, readable via port(). Throws ServerError.
  IngestServer(const std::string& host, std::uint16_t port,
               LatestPathSlot& slot);
  ~IngestServer();

  IngestServer(const IngestServer&) = delete;
  IngestServer& operator=(const IngestServer&) = delete;

  void start();
  /// Joins all threads, then closes the slot. Call from the owning thread;
  /// repeated calls are no-ops.
  void stop();

  std::uint16_t port() const { return port_; }
  ServerStats stats() const;

 private:
  void accept_loop();
  void connection_loop(int fd);
  void handle_line(const std::string& line, std::optional<std::uint64_t>& last_seq);

  LatestPathSlot& slot_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  bool started_ = false;
  bool stopped_ = false;
  std::thread acceptor_;
  std::mutex readers_mutex_;
  std::vector<std::thread> readers_;
  std::atomic<std::uint64_t> connections_{0};
  std::atomic<std::uint64_t> accepted_{0};
  std::atomic<std::uint64_t> rejected_{0};
};

}  // namespace pathlight
