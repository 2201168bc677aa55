#include "tdteach/live.hpp"

#include <algorithm>

#include "tdteach/error.hpp"
#include "tdteach/wire.hpp"

namespace tdteach {

void FeedbackInbox::push(TimedFeedback f) {
  std::lock_guard lock(mu_);
  queue_.push_back(f);
}

std::vector<TimedFeedback> FeedbackInbox::drain() {
  std::lock_guard lock(mu_);
  std::vector<TimedFeedback> out(queue_.begin(), queue_.end());
  queue_.clear();
  return out;
}

LivePlayer::LivePlayer(LiveTransport& transport, Clock& clock, std::int64_t tick_ms)
    : transport_(transport), clock_(clock), tick_ms_(tick_ms) {
  if (tick_ms_ <= 0) throw PreconditionError("live player: tick_ms must be > 0");
}

void LivePlayer::drain_into(FeedbackWindow& window, std::int64_t trial_start) {
  for (const TimedFeedback& f : transport_.drain_feedback()) {
    const std::int64_t t = f.arrival_ms - trial_start;
    if (t < window.start_ms()) {
      ++stale_;
      continue;
    }
    window.ingest(f.value, t);
  }
}

TrialPlayback LivePlayer::play(const TrialContext& ctx) {
  const Timeline& tl = *ctx.timeline;
  TrialPlayback out;
  out.window = FeedbackWindow(0, tl.total_ms);

  auto abort = [&](const char* reason) {
    out.aborted = true;
    out.abort_reason = reason;
    out.window.finalize();
    return out;
  };

  if (!transport_.await_running()) return abort("teacher disconnected before the trial");
  // Anything queued before the trial starts belongs to no trial.
  stale_ += transport_.drain_feedback().size();

  const std::int64_t trial_start = clock_.now_ms();
  for (const Phase& phase : tl.phases) {
    transport_.send(wire::phase_start(ctx, phase));
    const std::int64_t phase_end = trial_start + phase.end_ms;
    while (clock_.now_ms() < phase_end) {
      clock_.sleep_until_ms(std::min(clock_.now_ms() + tick_ms_, phase_end));
      if (!transport_.connected()) return abort("teacher disconnected during the trial");
    }
    drain_into(out.window, trial_start);
  }
  out.window.finalize();
  return out;
}

void LivePlayer::on_session_start(const SessionConfig& cfg) {
  transport_.send(wire::session_start(cfg));
}

void LivePlayer::on_trial_end(const TrialLog& trial) { transport_.send(wire::trial_end(trial)); }

void LivePlayer::on_episode_end(const EpisodeSummary& summary) {
  transport_.send(wire::episode_end(summary));
}

void LivePlayer::on_session_end(const SessionLog& log) { transport_.send(wire::session_end(log)); }

}  // namespace tdteach
