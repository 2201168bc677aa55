#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "tdteach/rl_core.hpp"

namespace tdteach {

enum class Mode { Mechanical, HumanLike };
enum class FaceValence { Positive, Neutral, Negative };
enum class CertaintyLevel { Certain, Uncertain };

struct EmotionConfig {
  /// Closed dead zone on the TD error: |delta| <= neutral_band is Neutral.
  double neutral_band = 0.05;
  /// Minimum gap between the two best Q values for a Certain movement.
  double certainty_gap_threshold = 0.1;

  void validate() const;
};

/// The three nonverbal channels for one trial. In Mechanical mode the
/// channels are still computed and logged but not rendered.
struct ExpressionPlan {
  Mode mode = Mode::HumanLike;
  CertaintyLevel certainty = CertaintyLevel::Uncertain;
  FaceValence face = FaceValence::Neutral;
  Action gaze_target;

  bool suppressed() const { return mode == Mode::Mechanical; }

  friend bool operator==(const ExpressionPlan&, const ExpressionPlan&) = default;
};

FaceValence face_valence(double td_error, const EmotionConfig& cfg);

/// Certain iff max(q_row) - second_max(q_row) >= certainty_gap_threshold.
CertaintyLevel movement_certainty(std::span<const double> q_row, const EmotionConfig& cfg);

/// Face follows the previous trial's TD error (Neutral when there is none);
/// certainty follows the current Q row; gaze announces the chosen action.
ExpressionPlan plan_expression(Mode mode, const ActionSelection& selection,
                               const std::optional<TDSignal>& last_td, const EmotionConfig& cfg);

std::string_view to_string(Mode m);
std::string_view to_string(FaceValence f);
std::string_view to_string(CertaintyLevel c);
Mode parse_mode(std::string_view s);
FaceValence parse_face(std::string_view s);
CertaintyLevel parse_certainty(std::string_view s);

}  // namespace tdteach
