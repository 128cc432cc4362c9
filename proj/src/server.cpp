#include "pathlight/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>

#include "pathlight/errors.hpp"
#include "pathlight/log.hpp"

namespace pathlight {

namespace {

constexpr std::size_t kMaxLineBytes = 16u << 20;
constexpr int kPollIntervalMs = 100;

}  // namespace

void LatestPathSlot::publish(PathMessage message) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    message_ = std::move(message);
    ++version_;
  }
  cond_.notify_all();
}

std::optional<PathSnapshot> LatestPathSlot::wait_newer(
    std::uint64_t last_version) {
  std::unique_lock<std::mutex> lock(mutex_);
  cond_.wait(lock,
             [&] { return version_ > last_version || closed_; });
  if (version_ > last_version) return PathSnapshot{version_, message_};
  return std::nullopt;
}

std::optional<PathSnapshot> LatestPathSlot::latest() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (version_ == 0) return std::nullopt;
  return PathSnapshot{version_, message_};
}

void LatestPathSlot::close() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    closed_ = true;
  }
  cond_.notify_all();
}

IngestServer::IngestServer(const std::string& host, std::uint16_t port,
                           LatestPathSlot& slot)
    : slot_(slot) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  const std::string resolved = host == "localhost" ? "127.0.0.1" : host;
  if (inet_pton(AF_INET, resolved.c_str(), &addr.sin_addr) != 1)
    throw ServerError("cannot parse listen address '" + host + "'");

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0)
    throw ServerError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) !=
      0) {
    const int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    char buf[128];
    std::snprintf(buf, sizeof buf, "cannot bind %s:%u: %s", host.c_str(),
                  unsigned(port), std::strerror(err));
    throw ServerError(buf);
  }
  if (::listen(listen_fd_, 16) != 0) {
    const int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw ServerError(std::string("listen: ") + std::strerror(err));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len) !=
      0) {
    const int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw ServerError(std::string("getsockname: ") + std::strerror(err));
  }
  port_ = ntohs(bound.sin_port);
}

IngestServer::~IngestServer() { stop(); }

void IngestServer::start() {
  if (started_ || listen_fd_ < 0) return;
  started_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void IngestServer::stop() {
  if (stopped_) return;
  stopped_ = true;
  stopping_.store(true);
  if (acceptor_.joinable()) acceptor_.join();
  {
    std::lock_guard<std::mutex> lock(readers_mutex_);
    for (std::thread& t : readers_)
      if (t.joinable()) t.join();
    readers_.clear();
  }
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  slot_.close();
}

ServerStats IngestServer::stats() const {
  return {connections_.load(), accepted_.load(), rejected_.load()};
}

void IngestServer::accept_loop() {
  while (!stopping_.load()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, kPollIntervalMs);
    if (rc < 0) {
      if (errno == EINTR) continue;
      log_error("accept_poll", std::strerror(errno));
      break;
    }
    if (rc == 0 || !(pfd.revents & POLLIN)) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno != EINTR && errno != ECONNABORTED)
        log_warn("accept", std::strerror(errno));
      continue;
    }
    connections_.fetch_add(1);
    std::lock_guard<std::mutex> lock(readers_mutex_);
    readers_.emplace_back([this, fd] { connection_loop(fd); });
  }
}

void IngestServer::connection_loop(int fd) {
  std::string pending;
  std::optional<std::uint64_t> last_seq;
  char buf[8192];
  while (!stopping_.load()) {
    pollfd pfd{fd, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, kPollIntervalMs);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) continue;
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) break;  // peer closed or connection reset
    pending.append(buf, static_cast<std::size_t>(n));
    if (pending.size() > kMaxLineBytes) {
      log_error("line_overflow", "dropping connection: record exceeds 16 MiB");
      break;
    }
    std::size_t start = 0;
    for (std::size_t nl = pending.find('\n', start); nl != std::string::npos;
         nl = pending.find('\n', start)) {
      std::string line = pending.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      start = nl + 1;
      if (!line.empty()) handle_line(line, last_seq);
    }
    pending.erase(0, start);
  }
  ::close(fd);
}

void IngestServer::handle_line(const std::string& line,
                               std::optional<std::uint64_t>& last_seq) {
  PathMessage msg;
  try {
    msg = parse_path_message(line);
  } catch (const ParseError& e) {
    rejected_.fetch_add(1);
    log_warn("parse_error", e.what());
    return;
  }
  if (path_message_has_seq(line)) {
    if (last_seq && msg.sequence_number <= *last_seq) {
      rejected_.fetch_add(1);
      char buf[96];
      std::snprintf(buf, sizeof buf,
                    "sequence %llu not greater than previous %llu",
                    static_cast<unsigned long long>(msg.sequence_number),
                    static_cast<unsigned long long>(*last_seq));
      log_warn("stale_sequence", buf);
      return;
    }
  } else {
    msg.sequence_number = last_seq ? *last_seq + 1 : 1;
  }
  last_seq = msg.sequence_number;
  accepted_.fetch_add(1);
  slot_.publish(std::move(msg));
}

}  // namespace pathlight
