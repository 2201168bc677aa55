#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <vector>

#include "json.hpp"
#include "tdteach/clock.hpp"
#include "tdteach/session.hpp"

namespace tdteach {

/// A feedback value stamped with its arrival time on the player's clock.
struct TimedFeedback {
  std::int64_t arrival_ms = 0;
  double value = 0.0;
};

/// Single-producer/single-consumer queue between the transport thread that
/// receives feedback and the session loop that drains it.
class FeedbackInbox {
 public:
  void push(TimedFeedback f);
  std::vector<TimedFeedback> drain();

 private:
  std::mutex mu_;
  std::deque<TimedFeedback> queue_;
};

/// Connection to the live teacher as seen by the session loop.
class LiveTransport {
 public:
  virtual ~LiveTransport() = default;
  virtual bool connected() const = 0;
  /// Best effort; messages to a disconnected client are discarded.
  virtual void send(const nlohmann::json& message) = 0;
  virtual std::vector<TimedFeedback> drain_feedback() = 0;
  /// Blocks while the session is paused. Returns false if the trial should
  /// not start (client gone or server stopping).
  virtual bool await_running() { return connected(); }
};

/// Plays each trial's timeline in real time (or on any Clock), announcing
/// phases to the client and collecting its feedback at phase ends. A lost
/// connection aborts the trial.
class LivePlayer final : public TrialPlayer {
 public:
  LivePlayer(LiveTransport& transport, Clock& clock, std::int64_t tick_ms = 20);

  TrialPlayback play(const TrialContext& ctx) override;

  void on_session_start(const SessionConfig& cfg) override;
  void on_trial_end(const TrialLog& trial) override;
  void on_episode_end(const EpisodeSummary& summary) override;
  void on_session_end(const SessionLog& log) override;

  /// Feedback that arrived between trials and was discarded.
  std::size_t stale_samples() const { return stale_; }

 private:
  void drain_into(FeedbackWindow& window, std::int64_t trial_start);

  LiveTransport& transport_;
  Clock& clock_;
  std::int64_t tick_ms_;
  std::size_t stale_ = 0;
};

}  // namespace tdteach
