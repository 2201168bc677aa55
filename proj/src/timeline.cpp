#include "tdteach/timeline.hpp"

#include <algorithm>
#include <string>

#include "tdteach/error.hpp"

namespace tdteach {

void TimelineConfig::validate() const {
  if (midair_hesitation_ms <= 0 || gaze_fixation_ms <= 0 || anticipatory_gaze_ms <= 0 ||
      pointing_ms <= 0) {
    throw PreconditionError("timeline: every phase duration must be > 0");
  }
}

std::int64_t TimelineConfig::duration_of(PhaseKind kind) const {
  switch (kind) {
    case PhaseKind::MidairHesitation: return midair_hesitation_ms;
    case PhaseKind::GazeFixation: return gaze_fixation_ms;
    case PhaseKind::AnticipatoryGaze: return anticipatory_gaze_ms;
    case PhaseKind::Pointing: return pointing_ms;
  }
  return pointing_ms;
}

std::vector<PhaseKind> phase_structure(Mode mode, CertaintyLevel certainty) {
  if (mode == Mode::Mechanical) return {PhaseKind::Pointing};
  if (certainty == CertaintyLevel::Certain) {
    return {PhaseKind::AnticipatoryGaze, PhaseKind::Pointing};
  }
  return {PhaseKind::MidairHesitation, PhaseKind::GazeFixation, PhaseKind::Pointing};
}

Timeline build_timeline(const ExpressionPlan& plan, const TimelineConfig& cfg) {
  cfg.validate();
  Timeline tl;
  std::int64_t t = 0;
  for (PhaseKind kind : phase_structure(plan.mode, plan.certainty)) {
    const std::int64_t end = t + cfg.duration_of(kind);
    tl.phases.push_back(Phase{kind, t, end});
    t = end;
  }
  tl.total_ms = t;
  return tl;
}

const Phase& phase_at(const Timeline& timeline, std::int64_t t_ms) {
  if (t_ms < 0 || t_ms >= timeline.total_ms) {
    throw PreconditionError("phase_at: t=" + std::to_string(t_ms) + " outside [0, " +
                            std::to_string(timeline.total_ms) + ")");
  }
  auto it = std::upper_bound(timeline.phases.begin(), timeline.phases.end(), t_ms,
                             [](std::int64_t t, const Phase& p) { return t < p.end_ms; });
  return *it;
}

std::string_view to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::MidairHesitation: return "midair_hesitation";
    case PhaseKind::GazeFixation: return "gaze_fixation";
    case PhaseKind::AnticipatoryGaze: return "anticipatory_gaze";
    case PhaseKind::Pointing: return "pointing";
  }
  return "pointing";
}

PhaseKind parse_phase_kind(std::string_view s) {
  if (s == "midair_hesitation") return PhaseKind::MidairHesitation;
  if (s == "gaze_fixation") return PhaseKind::GazeFixation;
  if (s == "anticipatory_gaze") return PhaseKind::AnticipatoryGaze;
  if (s == "pointing") return PhaseKind::Pointing;
  throw FormatError("unknown phase kind '" + std::string(s) + "'");
}

}  // namespace tdteach
