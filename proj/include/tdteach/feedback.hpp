#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tdteach {

inline constexpr double kFeedbackMin = -100.0;
inline constexpr double kFeedbackMax = 100.0;

/// One teacher reading, timestamped in ms relative to the trial start.
struct FeedbackSample {
  std::int64_t timestamp_ms = 0;
  double value = 0.0;

  friend bool operator==(const FeedbackSample&, const FeedbackSample&) = default;
};

enum class IngestOutcome { Appended, DroppedOutOfOrder, DroppedAfterEnd };

/// Teacher samples collected over one trial.
///
/// Single producer fills the window with ingest(); the session engine then
/// calls finalize(), after which the window is read-only.
class FeedbackWindow {
 public:
  FeedbackWindow() = default;
  FeedbackWindow(std::int64_t start_ms, std::int64_t end_ms);

  /// Rebuilds a finalized window, e.g. from a session log. Samples must
  /// satisfy the window invariants.
  static FeedbackWindow restore(std::int64_t start_ms, std::int64_t end_ms,
                                std::vector<FeedbackSample> samples, std::size_t dropped);

  /// Clamps `raw_value` into [-100, 100] and appends it. Samples not strictly
  /// after the last one, or past the window end, are dropped and counted.
  /// Throws PreconditionError for a timestamp before the window start, a
  /// non-finite value, or a finalized window.
  IngestOutcome ingest(double raw_value, std::int64_t timestamp_ms);

  void finalize() { finalized_ = true; }
  bool finalized() const { return finalized_; }

  std::int64_t start_ms() const { return start_ms_; }
  std::int64_t end_ms() const { return end_ms_; }
  std::span<const FeedbackSample> samples() const { return samples_; }
  std::size_t dropped() const { return dropped_; }

  friend bool operator==(const FeedbackWindow&, const FeedbackWindow&) = default;

 private:
  std::int64_t start_ms_ = 0;
  std::int64_t end_ms_ = 0;
  std::vector<FeedbackSample> samples_;
  std::size_t dropped_ = 0;
  bool finalized_ = false;
};

/// Integral over [t0, t1] of the zero-order-hold signal built from `samples`
/// (time-ordered). The held value is 0 before the first sample.
double hold_integral(std::span<const FeedbackSample> samples, double t0, double t1);

/// Held value at time t (0 before the first sample).
double hold_value_at(std::span<const FeedbackSample> samples, double t);

/// Time-weighted mean of the held feedback over the window, scaled to
/// [-1, 1]. An empty or zero-length window yields 0. The window must be
/// finalized.
double aggregate_reward(const FeedbackWindow& window);

}  // namespace tdteach
