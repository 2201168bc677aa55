#include "tdteach/feedback.hpp"

#include <algorithm>
#include <cmath>

#include "tdteach/error.hpp"

namespace tdteach {

FeedbackWindow::FeedbackWindow(std::int64_t start_ms, std::int64_t end_ms)
    : start_ms_(start_ms), end_ms_(end_ms) {
  if (end_ms < start_ms) throw PreconditionError("feedback window: end before start");
}

FeedbackWindow FeedbackWindow::restore(std::int64_t start_ms, std::int64_t end_ms,
                                       std::vector<FeedbackSample> samples,
                                       std::size_t dropped) {
  FeedbackWindow w(start_ms, end_ms);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.timestamp_ms < start_ms || s.timestamp_ms > end_ms) {
      throw FormatError("feedback window: sample outside window");
    }
    if (i > 0 && s.timestamp_ms <= samples[i - 1].timestamp_ms) {
      throw FormatError("feedback window: samples not strictly increasing");
    }
    if (!std::isfinite(s.value) || s.value < kFeedbackMin || s.value > kFeedbackMax) {
      throw FormatError("feedback window: sample value out of range");
    }
  }
  w.samples_ = std::move(samples);
  w.dropped_ = dropped;
  w.finalized_ = true;
  return w;
}

IngestOutcome FeedbackWindow::ingest(double raw_value, std::int64_t timestamp_ms) {
  if (finalized_) throw PreconditionError("feedback window: already finalized");
  if (!std::isfinite(raw_value)) throw PreconditionError("feedback window: non-finite value");
  if (timestamp_ms < start_ms_) {
    throw PreconditionError("feedback window: timestamp before window start");
  }
  if (timestamp_ms > end_ms_) {
    ++dropped_;
    return IngestOutcome::DroppedAfterEnd;
  }
  if (!samples_.empty() && timestamp_ms <= samples_.back().timestamp_ms) {
    ++dropped_;
    return IngestOutcome::DroppedOutOfOrder;
  }
  samples_.push_back({timestamp_ms, std::clamp(raw_value, kFeedbackMin, kFeedbackMax)});
  return IngestOutcome::Appended;
}

double hold_integral(std::span<const FeedbackSample> samples, double t0, double t1) {
  if (t1 <= t0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double seg_start = static_cast<double>(samples[i].timestamp_ms);
    const double seg_end = i + 1 < samples.size()
                               ? static_cast<double>(samples[i + 1].timestamp_ms)
                               : t1;
    const double lo = std::max(seg_start, t0);
    const double hi = std::min(seg_end, t1);
    if (hi > lo) total += samples[i].value * (hi - lo);
    if (seg_start >= t1) break;
  }
  return total;
}

double hold_value_at(std::span<const FeedbackSample> samples, double t) {
  double held = 0.0;
  for (const auto& s : samples) {
    if (static_cast<double>(s.timestamp_ms) > t) break;
    held = s.value;
  }
  return held;
}

double aggregate_reward(const FeedbackWindow& window) {
  if (!window.finalized()) throw PreconditionError("aggregate_reward: window not finalized");
  const auto duration = window.end_ms() - window.start_ms();
  if (duration <= 0 || window.samples().empty()) return 0.0;
  const double area = hold_integral(window.samples(), static_cast<double>(window.start_ms()),
                                    static_cast<double>(window.end_ms()));
  const double reward = area / static_cast<double>(duration) / kFeedbackMax;
  return std::clamp(reward, -1.0, 1.0);
}

}  // namespace tdteach
