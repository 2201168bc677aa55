#include "tdteach/analysis.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "tdteach/error.hpp"

namespace tdteach::analysis {

std::string_view to_string(TraceCondition c) {
  switch (c) {
    case TraceCondition::Mechanical: return "mechanical";
    case TraceCondition::CertainCorrect: return "certain_correct";
    case TraceCondition::CertainWrong: return "certain_wrong";
    case TraceCondition::UncertainCorrect: return "uncertain_correct";
    case TraceCondition::UncertainWrong: return "uncertain_wrong";
  }
  return "mechanical";
}

TraceCondition parse_condition(std::string_view s) {
  for (TraceCondition c : kAllConditions) {
    if (to_string(c) == s) return c;
  }
  throw FormatError("unknown trace condition '" + std::string(s) + "'");
}

std::optional<TraceCondition> classify_trial(const TrialLog& trial) {
  if (trial.aborted) return std::nullopt;
  if (trial.plan.mode == Mode::Mechanical) return TraceCondition::Mechanical;
  if (trial.plan.certainty == CertaintyLevel::Certain) {
    return trial.correct ? TraceCondition::CertainCorrect : TraceCondition::CertainWrong;
  }
  return trial.correct ? TraceCondition::UncertainCorrect : TraceCondition::UncertainWrong;
}

double AveragedTrace::bin_start(std::size_t bin) const {
  return static_cast<double>(bin) / static_cast<double>(bin_count());
}

double AveragedTrace::bin_end(std::size_t bin) const {
  return static_cast<double>(bin + 1) / static_cast<double>(bin_count());
}

double AveragedTrace::phase_mean(std::size_t phase_index) const {
  if (phase_index >= phases.size()) throw PreconditionError("phase_mean: phase out of range");
  double sum = 0.0;
  for (std::size_t b = 0; b < bins_per_phase; ++b) sum += mean[phase_index * bins_per_phase + b];
  return sum / static_cast<double>(bins_per_phase);
}

namespace {

std::vector<PhaseKind> structure_for(TraceCondition c) {
  switch (c) {
    case TraceCondition::Mechanical:
      return phase_structure(Mode::Mechanical, CertaintyLevel::Certain);
    case TraceCondition::CertainCorrect:
    case TraceCondition::CertainWrong:
      return phase_structure(Mode::HumanLike, CertaintyLevel::Certain);
    case TraceCondition::UncertainCorrect:
    case TraceCondition::UncertainWrong:
      return phase_structure(Mode::HumanLike, CertaintyLevel::Uncertain);
  }
  return {};
}

}  // namespace

AveragedTrace average_trace(std::span<const SessionLog> logs, TraceCondition condition,
                            std::size_t bins_per_phase) {
  if (bins_per_phase < 1) throw PreconditionError("average_trace: bins_per_phase must be >= 1");
  AveragedTrace trace;
  trace.condition = condition;
  trace.bins_per_phase = bins_per_phase;
  trace.phases = structure_for(condition);
  const std::size_t nbins = trace.phases.size() * bins_per_phase;
  std::vector<double> sums(nbins, 0.0);
  trace.count.assign(nbins, 0);

  for (const SessionLog& log : logs) {
    for (const TrialLog& trial : log.trials) {
      if (classify_trial(trial) != condition) continue;
      const auto& phases = trial.timeline.phases;
      if (phases.size() != trace.phases.size()) {
        throw FormatError("average_trace: trial " + std::to_string(trial.trial) +
                          " timeline does not match its condition");
      }
      const auto samples = trial.feedback.samples();
      for (std::size_t pi = 0; pi < phases.size(); ++pi) {
        if (phases[pi].kind != trace.phases[pi]) {
          throw FormatError("average_trace: unexpected phase kind in trial " +
                            std::to_string(trial.trial));
        }
        const double start = static_cast<double>(phases[pi].start_ms);
        const double width = static_cast<double>(phases[pi].duration_ms()) /
                             static_cast<double>(bins_per_phase);
        for (std::size_t b = 0; b < bins_per_phase; ++b) {
          const double t0 = start + width * static_cast<double>(b);
          const double t1 = start + width * static_cast<double>(b + 1);
          const std::size_t bin = pi * bins_per_phase + b;
          sums[bin] += hold_integral(samples, t0, t1) / (t1 - t0);
          ++trace.count[bin];
        }
      }
      ++trace.trials;
    }
  }
  if (trace.trials == 0) {
    throw PreconditionError("average_trace: no trials for condition " +
                            std::string(to_string(condition)));
  }
  trace.mean.resize(nbins);
  for (std::size_t b = 0; b < nbins; ++b) trace.mean[b] = sums[b] / static_cast<double>(trace.count[b]);
  for (std::size_t k = 1; k < trace.phases.size(); ++k) {
    trace.boundaries.push_back(static_cast<double>(k) / static_cast<double>(trace.phases.size()));
  }
  return trace;
}

std::optional<double> feedback_onset(const AveragedTrace& trace, double magnitude_threshold) {
  if (!(magnitude_threshold > 0.0)) throw PreconditionError("feedback_onset: threshold must be > 0");
  for (std::size_t b = 0; b < trace.bin_count(); ++b) {
    if (std::fabs(trace.mean[b]) >= magnitude_threshold) return trace.bin_start(b);
  }
  return std::nullopt;
}

void write_trace_csv(std::ostream& out, const AveragedTrace& trace) {
  out << "condition,bin,phase,t_start,t_end,mean,n\n";
  for (std::size_t b = 0; b < trace.bin_count(); ++b) {
    out << to_string(trace.condition) << ',' << b << ','
        << to_string(trace.phases[b / trace.bins_per_phase]) << ',' << trace.bin_start(b) << ','
        << trace.bin_end(b) << ',' << trace.mean[b] << ',' << trace.count[b] << '\n';
  }
}

void write_onsets_csv(std::ostream& out, std::span<const OnsetRow> rows) {
  out << "condition,trials,onset,boundaries\n";
  for (const OnsetRow& r : rows) {
    out << to_string(r.condition) << ',' << r.trials << ',';
    if (r.onset) out << *r.onset;
    out << ',';
    for (std::size_t i = 0; i < r.boundaries.size(); ++i) {
      if (i) out << ';';
      out << r.boundaries[i];
    }
    out << '\n';
  }
}

}  // namespace tdteach::analysis
