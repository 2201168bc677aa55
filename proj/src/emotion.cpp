#include "tdteach/emotion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tdteach/error.hpp"

namespace tdteach {

void EmotionConfig::validate() const {
  if (!(neutral_band >= 0.0) || !std::isfinite(neutral_band)) {
    throw PreconditionError("emotion: neutral_band must be a finite value >= 0");
  }
  if (!(certainty_gap_threshold >= 0.0) || !std::isfinite(certainty_gap_threshold)) {
    throw PreconditionError("emotion: certainty_gap_threshold must be a finite value >= 0");
  }
}

FaceValence face_valence(double td_error, const EmotionConfig& cfg) {
  if (!std::isfinite(td_error)) throw PreconditionError("face_valence: non-finite TD error");
  if (td_error > cfg.neutral_band) return FaceValence::Positive;
  if (td_error < -cfg.neutral_band) return FaceValence::Negative;
  return FaceValence::Neutral;
}

CertaintyLevel movement_certainty(std::span<const double> q_row, const EmotionConfig& cfg) {
  if (q_row.size() < 2) throw PreconditionError("movement_certainty: row needs >= 2 entries");
  double best = -std::numeric_limits<double>::infinity();
  double second = best;
  for (double v : q_row) {
    if (v > best) {
      second = best;
      best = v;
    } else if (v > second) {
      second = v;
    }
  }
  return (best - second) >= cfg.certainty_gap_threshold ? CertaintyLevel::Certain
                                                         : CertaintyLevel::Uncertain;
}

ExpressionPlan plan_expression(Mode mode, const ActionSelection& selection,
                               const std::optional<TDSignal>& last_td, const EmotionConfig& cfg) {
  if (selection.action.object >= selection.q_row.size()) {
    throw PreconditionError("plan_expression: selection does not match its q_row");
  }
  ExpressionPlan plan;
  plan.mode = mode;
  plan.gaze_target = selection.action;
  plan.certainty = movement_certainty(selection.q_row, cfg);
  plan.face = last_td ? face_valence(last_td->td_error, cfg) : FaceValence::Neutral;
  return plan;
}

std::string_view to_string(Mode m) {
  return m == Mode::Mechanical ? "mechanical" : "humanlike";
}

std::string_view to_string(FaceValence f) {
  switch (f) {
    case FaceValence::Positive: return "positive";
    case FaceValence::Neutral: return "neutral";
    case FaceValence::Negative: return "negative";
  }
  return "neutral";
}

std::string_view to_string(CertaintyLevel c) {
  return c == CertaintyLevel::Certain ? "certain" : "uncertain";
}

Mode parse_mode(std::string_view s) {
  if (s == "mechanical") return Mode::Mechanical;
  if (s == "humanlike") return Mode::HumanLike;
  throw FormatError("unknown mode '" + std::string(s) + "'");
}

FaceValence parse_face(std::string_view s) {
  if (s == "positive") return FaceValence::Positive;
  if (s == "neutral") return FaceValence::Neutral;
  if (s == "negative") return FaceValence::Negative;
  throw FormatError("unknown face valence '" + std::string(s) + "'");
}

CertaintyLevel parse_certainty(std::string_view s) {
  if (s == "certain") return CertaintyLevel::Certain;
  if (s == "uncertain") return CertaintyLevel::Uncertain;
  throw FormatError("unknown certainty '" + std::string(s) + "'");
}

}  // namespace tdteach
