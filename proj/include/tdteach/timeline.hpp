#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tdteach/emotion.hpp"

namespace tdteach {

enum class PhaseKind { MidairHesitation, GazeFixation, AnticipatoryGaze, Pointing };

/// Half-open interval [start_ms, end_ms) of one movement.
struct Phase {
  PhaseKind kind = PhaseKind::Pointing;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  std::int64_t duration_ms() const { return end_ms - start_ms; }
  bool contains(std::int64_t t_ms) const { return t_ms >= start_ms && t_ms < end_ms; }

  friend bool operator==(const Phase&, const Phase&) = default;
};

/// Contiguous phases starting at 0. Each boundary between phases is one
/// "a movement ends, another begins" instant.
struct Timeline {
  std::vector<Phase> phases;
  std::int64_t total_ms = 0;

  std::size_t boundary_count() const { return phases.empty() ? 0 : phases.size() - 1; }

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

struct TimelineConfig {
  std::int64_t midair_hesitation_ms = 1500;
  std::int64_t gaze_fixation_ms = 1000;
  std::int64_t anticipatory_gaze_ms = 1000;
  std::int64_t pointing_ms = 2000;

  void validate() const;
  std::int64_t duration_of(PhaseKind kind) const;
};

/// Phase structure for a plan:
///   Mechanical            -> Pointing
///   HumanLike, Certain    -> AnticipatoryGaze, Pointing
///   HumanLike, Uncertain  -> MidairHesitation, GazeFixation, Pointing
std::vector<PhaseKind> phase_structure(Mode mode, CertaintyLevel certainty);

Timeline build_timeline(const ExpressionPlan& plan, const TimelineConfig& cfg);

/// The phase containing t_ms. Throws PreconditionError outside [0, total_ms).
const Phase& phase_at(const Timeline& timeline, std::int64_t t_ms);

std::string_view to_string(PhaseKind k);
PhaseKind parse_phase_kind(std::string_view s);

}  // namespace tdteach
