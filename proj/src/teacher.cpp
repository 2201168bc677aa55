#include "tdteach/teacher.hpp"

#include "tdteach/error.hpp"
#include "tdteach/feedback.hpp"

namespace tdteach {

void TeacherModel::validate() const {
  if (reaction_latency_ms < 0) throw PreconditionError("teacher: reaction_latency_ms must be >= 0");
  if (sample_period_ms <= 0) throw PreconditionError("teacher: sample_period_ms must be > 0");
  const bool ordered = correct_value <= kFeedbackMax && correct_value > 0.0 &&
                       0.0 > hesitation_value_correct &&
                       hesitation_value_correct >= hesitation_value_wrong &&
                       hesitation_value_wrong >= wrong_value && wrong_value >= kFeedbackMin;
  if (!ordered) {
    throw PreconditionError(
        "teacher: need 100 >= correct > 0 > hesitation_correct >= hesitation_wrong >= wrong >= -100");
  }
}

double simulated_teacher_sample(const TeacherModel& teacher, Mode mode, const Phase& phase,
                                std::int64_t t_ms, bool is_correct) {
  if (!phase.contains(t_ms)) throw PreconditionError("teacher: t outside the given phase");
  const double verdict = is_correct ? teacher.correct_value : teacher.wrong_value;

  if (mode == Mode::Mechanical) {
    if (phase.kind != PhaseKind::Pointing) {
      throw PreconditionError("teacher: mechanical trials only point");
    }
    // Onset at the middle of the pointing movement.
    return 2 * (t_ms - phase.start_ms) >= phase.duration_ms() ? verdict : 0.0;
  }

  if (t_ms < teacher.reaction_latency_ms) return 0.0;
  switch (phase.kind) {
    case PhaseKind::MidairHesitation:
    case PhaseKind::GazeFixation:
      return is_correct ? teacher.hesitation_value_correct : teacher.hesitation_value_wrong;
    case PhaseKind::AnticipatoryGaze:
    case PhaseKind::Pointing:
      return verdict;
  }
  return 0.0;
}

}  // namespace tdteach
