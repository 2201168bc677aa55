#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tdteach/clock.hpp"
#include "tdteach/emotion.hpp"
#include "tdteach/feedback.hpp"
#include "tdteach/rl_core.hpp"
#include "tdteach/teacher.hpp"
#include "tdteach/timeline.hpp"

namespace tdteach {

struct SessionConfig {
  Mode mode = Mode::HumanLike;
  TaskSpec task;
  LearnerConfig learner;
  EmotionConfig emotion;
  TimelineConfig timeline;
  /// Simulated teacher; absent means feedback comes from an external (live) client.
  std::optional<TeacherModel> teacher = TeacherModel{};
  std::size_t max_episodes = 500;
  bool stop_on_convergence = true;

  void validate() const;
};

struct TrialLog {
  std::size_t episode = 0;
  std::size_t trial = 0;
  AgentState state;
  ActionSelection selection;
  double epsilon = 0.0;
  bool correct = false;
  ExpressionPlan plan;
  Timeline timeline;
  FeedbackWindow feedback;
  double reward = 0.0;
  std::optional<TDSignal> td;
  bool aborted = false;
  std::string abort_reason;
};

struct EpisodeSummary {
  std::size_t episode = 0;
  std::vector<std::size_t> greedy_sequence;
  bool converged = false;
  std::size_t correct_trials = 0;
};

struct SessionLog {
  SessionConfig config;
  std::vector<TrialLog> trials;
  std::vector<EpisodeSummary> episodes;
  QTable final_q;
  /// First episode whose end-of-episode greedy policy matched the target.
  std::optional<std::size_t> convergence_episode;
  bool aborted = false;
};

/// What a player needs to perform one trial.
struct TrialContext {
  std::size_t episode = 0;
  std::size_t trial = 0;
  AgentState state;
  const ActionSelection* selection = nullptr;
  const ExpressionPlan* plan = nullptr;
  const Timeline* timeline = nullptr;
  bool is_correct = false;
};

struct TrialPlayback {
  FeedbackWindow window;  // finalized
  bool aborted = false;
  std::string abort_reason;
};

/// Plays a trial's timeline against a teacher and returns the feedback.
class TrialPlayer {
 public:
  virtual ~TrialPlayer() = default;
  virtual TrialPlayback play(const TrialContext& ctx) = 0;

  virtual void on_session_start(const SessionConfig&) {}
  virtual void on_trial_end(const TrialLog&) {}
  virtual void on_episode_end(const EpisodeSummary&) {}
  virtual void on_session_end(const SessionLog&) {}
};

/// Samples a TeacherModel every sample_period_ms on a (usually virtual) clock.
class SimulatedPlayer final : public TrialPlayer {
 public:
  SimulatedPlayer(TeacherModel teacher, Clock& clock);
  TrialPlayback play(const TrialContext& ctx) override;

 private:
  TeacherModel teacher_;
  Clock& clock_;
};

/// Receives log records as they are produced (append-only).
class SessionLogSink {
 public:
  virtual ~SessionLogSink() = default;
  virtual void header(const SessionConfig& cfg) = 0;
  virtual void trial(const TrialLog& trial) = 0;
  virtual void episode(const EpisodeSummary& summary) = 0;
  virtual void footer(const SessionLog& log) = 0;
};

/// Owns the learner state for one session and drives trials through a player.
class SessionEngine {
 public:
  SessionEngine(SessionConfig cfg, TrialPlayer& player, SessionLogSink* sink = nullptr);

  /// Resets the agent to the first slot of episode `episode`.
  void begin_episode(std::size_t episode);

  /// select -> plan -> timeline -> play -> aggregate -> TD update -> advance.
  /// An aborted playback leaves the Q table and state untouched.
  TrialLog run_trial();

  SessionLog run_session();

  const SessionConfig& config() const { return cfg_; }
  const QTable& q_table() const { return q_; }
  AgentState state() const { return state_; }
  bool at_terminal() const { return q_.is_terminal(state_); }

 private:
  SessionConfig cfg_;
  TrialPlayer& player_;
  SessionLogSink* sink_;
  QTable q_;
  SplitMix64 rng_;
  AgentState state_;
  std::size_t episode_ = 0;
  std::size_t next_trial_ = 0;
  std::optional<TDSignal> last_td_;
};

/// Convenience: run a whole simulated session on a virtual clock.
SessionLog simulate_session(const SessionConfig& cfg, SessionLogSink* sink = nullptr);

/// Rebuilds the Q table by re-applying every logged TD update from a zero
/// table, re-deriving each reward from its feedback window. Throws
/// FormatError when a logged value disagrees with the recomputation.
QTable replay_q_table(const SessionLog& log);

}  // namespace tdteach
