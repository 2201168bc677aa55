#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tdteach/session.hpp"

namespace tdteach {

struct LiveServerOptions {
  SessionConfig config;  // teacher is ignored; feedback comes from the client
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks an ephemeral port
  /// Static UI assets served over plain HTTP; empty disables file serving.
  std::filesystem::path static_dir;
  /// Each session's log is written here as it runs.
  std::filesystem::path log_dir = ".";
  std::int64_t tick_ms = 20;
};

/// Web-socket endpoint (any path, usually /ws) for one teacher client at a
/// time. A newer connection replaces the current one; on connect the client
/// receives the last session_start and phase_start again so it can restore
/// its view. A `control{start}` begins a session in the current mode (or
/// resumes a paused one); sessions run on their own thread against a wall
/// clock.
class LiveServer {
 public:
  explicit LiveServer(LiveServerOptions options);
  ~LiveServer();

  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  /// Binds and starts serving; returns the bound port.
  std::uint16_t start();
  void stop();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();

  std::vector<std::filesystem::path> completed_logs() const;

  class Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace tdteach
