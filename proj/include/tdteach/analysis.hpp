#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tdteach/session.hpp"

namespace tdteach::analysis {

/// Trial groupings used for the phase-aligned average feedback curves.
enum class TraceCondition { Mechanical, CertainCorrect, CertainWrong, UncertainCorrect, UncertainWrong };

inline constexpr std::array<TraceCondition, 5> kAllConditions{
    TraceCondition::Mechanical, TraceCondition::CertainCorrect, TraceCondition::CertainWrong,
    TraceCondition::UncertainCorrect, TraceCondition::UncertainWrong};

inline constexpr std::size_t kDefaultBinsPerPhase = 50;
inline constexpr double kDefaultOnsetThreshold = 10.0;

std::string_view to_string(TraceCondition c);
TraceCondition parse_condition(std::string_view s);

/// Condition of a completed trial; nullopt for aborted trials.
std::optional<TraceCondition> classify_trial(const TrialLog& trial);

/// Mean feedback over trials of one condition, each phase stretched onto the
/// same number of bins so trials with different durations line up.
struct AveragedTrace {
  TraceCondition condition = TraceCondition::Mechanical;
  std::size_t bins_per_phase = kDefaultBinsPerPhase;
  std::vector<PhaseKind> phases;
  std::vector<double> mean;          // per bin, on the [-100, 100] scale
  std::vector<std::size_t> count;    // trials contributing to each bin
  std::vector<double> boundaries;    // phase boundaries in normalized time (0, 1)
  std::size_t trials = 0;

  std::size_t bin_count() const { return mean.size(); }
  double bin_start(std::size_t bin) const;
  double bin_end(std::size_t bin) const;
  /// Average of the bins belonging to phase `phase_index`.
  double phase_mean(std::size_t phase_index) const;
};

/// Throws PreconditionError when no trial in `logs` matches `condition`.
AveragedTrace average_trace(std::span<const SessionLog> logs, TraceCondition condition,
                            std::size_t bins_per_phase = kDefaultBinsPerPhase);

/// Normalized start time of the first bin with |mean| >= threshold.
std::optional<double> feedback_onset(const AveragedTrace& trace, double magnitude_threshold);

/// CSV: condition,bin,phase,t_start,t_end,mean,n
void write_trace_csv(std::ostream& out, const AveragedTrace& trace);

struct OnsetRow {
  TraceCondition condition;
  std::size_t trials = 0;
  std::optional<double> onset;
  std::vector<double> boundaries;
};

/// CSV: condition,trials,onset,boundaries  (onset empty when never reached,
/// boundaries separated by ';')
void write_onsets_csv(std::ostream& out, std::span<const OnsetRow> rows);

}  // namespace tdteach::analysis
