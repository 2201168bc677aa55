#include "tdteach/session.hpp"

#include <algorithm>
#include <cstring>

#include "tdteach/error.hpp"

namespace tdteach {

void SessionConfig::validate() const {
  task.validate();
  learner.validate();
  emotion.validate();
  timeline.validate();
  if (teacher) teacher->validate();
  if (max_episodes < 1) throw PreconditionError("session: max_episodes must be >= 1");
}

SimulatedPlayer::SimulatedPlayer(TeacherModel teacher, Clock& clock)
    : teacher_(teacher), clock_(clock) {
  teacher_.validate();
}

TrialPlayback SimulatedPlayer::play(const TrialContext& ctx) {
  const Timeline& tl = *ctx.timeline;
  const std::int64_t trial_start = clock_.now_ms();
  TrialPlayback out;
  out.window = FeedbackWindow(0, tl.total_ms);
  for (std::int64_t t = 0; t < tl.total_ms; t += teacher_.sample_period_ms) {
    clock_.sleep_until_ms(trial_start + t);
    const Phase& phase = phase_at(tl, t);
    out.window.ingest(
        simulated_teacher_sample(teacher_, ctx.plan->mode, phase, t, ctx.is_correct), t);
  }
  clock_.sleep_until_ms(trial_start + tl.total_ms);
  out.window.finalize();
  return out;
}

SessionEngine::SessionEngine(SessionConfig cfg, TrialPlayer& player, SessionLogSink* sink)
    : cfg_(std::move(cfg)),
      player_(player),
      sink_(sink),
      q_(cfg_.task),
      rng_(cfg_.learner.rng_seed) {
  cfg_.validate();
}

void SessionEngine::begin_episode(std::size_t episode) {
  episode_ = episode;
  state_ = AgentState{0};
}

TrialLog SessionEngine::run_trial() {
  if (at_terminal()) throw PreconditionError("run_trial: episode already complete");

  TrialLog log;
  log.episode = episode_;
  log.trial = next_trial_++;
  log.state = state_;
  log.epsilon = cfg_.learner.epsilon(episode_);
  log.selection = select_action(q_, state_, cfg_.learner, episode_, rng_);
  log.correct = log.selection.action.object == cfg_.task.target_sequence[state_.position];
  log.plan = plan_expression(cfg_.mode, log.selection, last_td_, cfg_.emotion);
  log.timeline = build_timeline(log.plan, cfg_.timeline);

  TrialContext ctx;
  ctx.episode = episode_;
  ctx.trial = log.trial;
  ctx.state = state_;
  ctx.selection = &log.selection;
  ctx.plan = &log.plan;
  ctx.timeline = &log.timeline;
  ctx.is_correct = log.correct;

  TrialPlayback playback = player_.play(ctx);
  if (!playback.window.finalized()) playback.window.finalize();
  log.feedback = std::move(playback.window);

  if (playback.aborted) {
    log.aborted = true;
    log.abort_reason = std::move(playback.abort_reason);
    player_.on_trial_end(log);
    return log;
  }

  log.reward = aggregate_reward(log.feedback);
  const AgentState next = advance_state(state_, cfg_.task);
  log.td = td_update(q_, state_, log.selection.action, log.reward, next, cfg_.learner);
  last_td_ = log.td;
  state_ = next;
  player_.on_trial_end(log);
  return log;
}

SessionLog SessionEngine::run_session() {
  SessionLog out;
  out.config = cfg_;
  player_.on_session_start(cfg_);
  if (sink_) sink_->header(cfg_);

  for (std::size_t ep = 0; ep < cfg_.max_episodes; ++ep) {
    begin_episode(ep);
    EpisodeSummary summary;
    summary.episode = ep;
    while (!at_terminal()) {
      TrialLog trial = run_trial();
      if (sink_) sink_->trial(trial);
      const bool aborted = trial.aborted;
      if (!aborted && trial.correct) ++summary.correct_trials;
      out.trials.push_back(std::move(trial));
      if (aborted) {
        out.aborted = true;
        break;
      }
    }
    if (out.aborted) break;

    summary.greedy_sequence = greedy_policy(q_);
    summary.converged = summary.greedy_sequence == cfg_.task.target_sequence;
    if (summary.converged && !out.convergence_episode) out.convergence_episode = ep;
    if (sink_) sink_->episode(summary);
    player_.on_episode_end(summary);
    out.episodes.push_back(summary);
    if (summary.converged && cfg_.stop_on_convergence) break;
  }

  out.final_q = q_;
  if (sink_) sink_->footer(out);
  player_.on_session_end(out);
  return out;
}

SessionLog simulate_session(const SessionConfig& cfg, SessionLogSink* sink) {
  if (!cfg.teacher) throw PreconditionError("simulate_session: config has no simulated teacher");
  VirtualClock clock;
  SimulatedPlayer player(*cfg.teacher, clock);
  SessionEngine engine(cfg, player, sink);
  return engine.run_session();
}

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

QTable replay_q_table(const SessionLog& log) {
  QTable q(log.config.task);
  for (const TrialLog& trial : log.trials) {
    if (trial.aborted) continue;
    if (!trial.td) throw FormatError("replay: completed trial without a TD record");
    const double reward = aggregate_reward(trial.feedback);
    if (!same_bits(reward, trial.reward)) {
      throw FormatError("replay: trial " + std::to_string(trial.trial) +
                        " reward does not match its feedback window");
    }
    const TDSignal sig = td_update(q, trial.td->state, trial.td->action, reward,
                                   trial.td->next_state, log.config.learner);
    if (!same_bits(sig.td_error, trial.td->td_error) ||
        !same_bits(sig.q_after, trial.td->q_after)) {
      throw FormatError("replay: trial " + std::to_string(trial.trial) +
                        " TD update diverges from the log");
    }
  }
  return q;
}

}  // namespace tdteach
