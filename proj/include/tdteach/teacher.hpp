#pragma once

#include <cstdint>

#include "tdteach/emotion.hpp"
#include "tdteach/timeline.hpp"

namespace tdteach {

/// Scripted stand-in for a human teacher holding the feedback stick.
///
/// Mechanical trials: silent until the middle of the pointing movement, then
/// full approval or disapproval.
/// Human-like trials: silent for `reaction_latency_ms` after the trial's first
/// cue, then a mild (correct) or strong (wrong) negative nudge while the
/// agent hesitates, and full approval/disapproval once the target is known
/// from the anticipatory gaze or pointing.
struct TeacherModel {
  std::int64_t reaction_latency_ms = 400;
  double correct_value = 80.0;
  double wrong_value = -80.0;
  double hesitation_value_correct = -10.0;
  double hesitation_value_wrong = -50.0;
  std::int64_t sample_period_ms = 50;

  void validate() const;

  friend bool operator==(const TeacherModel&, const TeacherModel&) = default;
};

/// Stick position at trial time t_ms, which must lie inside `phase`.
double simulated_teacher_sample(const TeacherModel& teacher, Mode mode, const Phase& phase,
                                std::int64_t t_ms, bool is_correct);

}  // namespace tdteach
