// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runs headless on a virtual clock.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tdteach/analysis.hpp"
#include "tdteach/emotion.hpp"
#include "tdteach/rl_core.hpp"
#include "tdteach/session.hpp"
#include "tdteach/session_log.hpp"
#include "tdteach/stats.hpp"
#include "tdteach/timeline.hpp"

using namespace tdteach;

namespace {

constexpr double kPTolerance3_49 = 0.0002;
constexpr double kPTolerance4_5x = 0.0001;
constexpr double kPTolerance2_22 = 0.001;
constexpr double kTTestOracleTolerance = 1e-6;
constexpr std::size_t kSeeds = 20;
constexpr std::size_t kSessionsPerMode = 50;
constexpr double kOnsetThreshold = 10.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %-32s %7.3fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome p_value_reproduction() {
  struct Row {
    double t, expected, tol;
  };
  const Row rows[] = {{-3.49, 0.0020, kPTolerance3_49},
                      {-4.54, 0.0001, kPTolerance4_5x},
                      {-4.57, 0.0001, kPTolerance4_5x},
                      {-2.22, 0.0367, kPTolerance2_22}};
  std::ostringstream detail;
  bool ok = true;
  for (const Row& r : rows) {
    const double p = stats::p_from_t(r.t, 22);
    ok &= std::fabs(p - r.expected) <= r.tol;
    detail << "t=" << r.t << ":p=" << p << " ";
  }
  const double p586 = stats::p_from_t(-5.86, 22);
  ok &= p586 < 0.0001;
  detail << "t=-5.86:p=" << p586;
  return {ok, detail.str()};
}

Outcome td_oracle_equivalence() {
  std::mt19937_64 gen(20260101);
  std::uniform_real_distribution<double> qd(-10.0, 10.0), rd(-1.0, 1.0), unit(0.0, 1.0);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    QTable q(2, 3);
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t o = 0; o < 3; ++o) q.at(p, o) = qd(gen);
    LearnerConfig cfg;
    cfg.alpha = unit(gen);
    cfg.gamma = unit(gen);
    const double reward = rd(gen);
    const bool terminal_next = i % 4 == 0;
    const AgentState s{terminal_next ? 1u : 0u};
    const AgentState next{s.position + 1};
    const Action a{static_cast<std::size_t>(i % 3)};
    const double q_before = q.at(s.position, a.object);
    const double max_next =
        terminal_next ? 0.0 : std::max({q.at(1, 0), q.at(1, 1), q.at(1, 2)});
    const auto want = oracle::td_step(q_before, reward, cfg.gamma, max_next, cfg.alpha);
    const TDSignal got = td_update(q, s, a, reward, next, cfg);
    if (!same_bits(got.td_error, want.delta) || !same_bits(got.q_after, want.q_after) ||
        !same_bits(q.at(s.position, a.object), want.q_after)) {
      ++mismatches;
    }
  }
  return {mismatches == 0, fmt("1000 cases, %zu bitwise mismatches", mismatches)};
}

Outcome convergence_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t converged = 0, worst = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    SessionConfig cfg;
    cfg.learner.rng_seed = seed;
    const SessionLog log = simulate_session(cfg);
    if (log.convergence_episode && *log.convergence_episode < 500 &&
        greedy_policy(log.final_q) == cfg.task.target_sequence) {
      ++converged;
      worst = std::max(worst, *log.convergence_episode);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {converged == kSeeds && secs < 10.0,
          fmt("%zu/%zu seeds converged, slowest at episode %zu, %.2fs", converged, kSeeds,
              worst, secs)};
}

std::vector<SessionLog> simulate_many(Mode mode) {
  std::vector<SessionLog> logs;
  for (std::uint64_t seed = 1; seed <= kSessionsPerMode; ++seed) {
    SessionConfig cfg;
    cfg.mode = mode;
    cfg.learner.rng_seed = 1000 + seed;
    logs.push_back(simulate_session(cfg));
  }
  return logs;
}

Outcome figure2_shape() {
  using analysis::TraceCondition;
  const auto mech_logs = simulate_many(Mode::Mechanical);
  const auto human_logs = simulate_many(Mode::HumanLike);

  const auto mech = analysis::average_trace(mech_logs, TraceCondition::Mechanical);
  const auto mech_onset = analysis::feedback_onset(mech, kOnsetThreshold);
  const bool a = mech_onset && *mech_onset >= 0.5;

  const auto certain = analysis::average_trace(human_logs, TraceCondition::CertainCorrect);
  const auto certain_onset = analysis::feedback_onset(certain, kOnsetThreshold);
  const bool b = certain_onset && certain.phases.size() == 2 &&
                 certain.phases[0] == PhaseKind::AnticipatoryGaze &&
                 *certain_onset < certain.boundaries.at(0);

  const auto uc = analysis::average_trace(human_logs, TraceCondition::UncertainCorrect);
  const auto uw = analysis::average_trace(human_logs, TraceCondition::UncertainWrong);
  const double hes_c = uc.phase_mean(0), hes_w = uw.phase_mean(0);
  const bool c = uc.phases.at(0) == PhaseKind::MidairHesitation && hes_c < 0.0 && hes_w < 0.0 &&
                 std::fabs(hes_w) > std::fabs(hes_c);

  return {a && b && c,
          fmt("(a) mech onset=%.3f [%zu trials] (b) certain onset=%.3f < %.3f [%zu trials] "
              "(c) hesitation mean correct=%.2f wrong=%.2f",
              mech_onset.value_or(-1.0), mech.trials, certain_onset.value_or(-1.0),
              certain.boundaries.empty() ? -1.0 : certain.boundaries[0], certain.trials, hes_c,
              hes_w)};
}

Outcome timeline_structure() {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::int64_t> dur(1, 5000);
  std::size_t bad = 0, configs = 0;
  for (int i = 0; i < 200; ++i) {
    TimelineConfig tc{dur(gen), dur(gen), dur(gen), dur(gen)};
    if (i == 0) tc = TimelineConfig{};
    ++configs;
    auto count = [&](Mode m, CertaintyLevel c) {
      ExpressionPlan plan;
      plan.mode = m;
      plan.certainty = c;
      return build_timeline(plan, tc).phases.size();
    };
    bad += count(Mode::Mechanical, CertaintyLevel::Certain) != 1;
    bad += count(Mode::Mechanical, CertaintyLevel::Uncertain) != 1;
    bad += count(Mode::HumanLike, CertaintyLevel::Certain) != 2;
    bad += count(Mode::HumanLike, CertaintyLevel::Uncertain) != 3;
  }
  return {bad == 0, fmt("%zu configs, %zu wrong phase counts", configs, bad)};
}

Outcome emotion_totality() {
  const EmotionConfig cfg;
  std::vector<double> grid;
  for (int i = -20000; i <= 20000; ++i) grid.push_back(i * 1e-4);
  for (double b : {cfg.neutral_band, -cfg.neutral_band}) {
    grid.push_back(b);
    grid.push_back(std::nextafter(b, 0.0));
    grid.push_back(std::nextafter(b, b > 0 ? 1.0 : -1.0));
  }
  std::size_t bad = 0;
  for (double d : grid) {
    const FaceValence f = face_valence(d, cfg);
    const FaceValence expect = d > cfg.neutral_band    ? FaceValence::Positive
                               : d < -cfg.neutral_band ? FaceValence::Negative
                                                       : FaceValence::Neutral;
    bad += f != expect;
    const FaceValence m = face_valence(-d, cfg);
    const FaceValence mirrored = f == FaceValence::Positive   ? FaceValence::Negative
                                 : f == FaceValence::Negative ? FaceValence::Positive
                                                              : FaceValence::Neutral;
    bad += m != mirrored;
  }

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> val(-1.0, 1.0), shift(-50.0, 50.0);
  std::size_t shift_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> row(5);
    for (double& v : row) v = val(gen);
    // Dyadic shift keeps the additions exact, so the gap is unchanged.
    const double c = std::ldexp(std::round(shift(gen) * 8.0), -3);
    std::vector<double> shifted = row;
    for (double& v : shifted) v += c;
    shift_bad += movement_certainty(row, cfg) != movement_certainty(shifted, cfg);
  }
  return {bad == 0 && shift_bad == 0,
          fmt("%zu deltas, %zu valence errors; 1000 rows, %zu shift-variant", grid.size(), bad,
              shift_bad)};
}

Outcome determinism_and_replay() {
  std::size_t bad = 0;
  for (Mode mode : {Mode::Mechanical, Mode::HumanLike}) {
    SessionConfig cfg;
    cfg.mode = mode;
    cfg.learner.rng_seed = 99;
    std::ostringstream a, b;
    write_session_log(a, simulate_session(cfg));
    write_session_log(b, simulate_session(cfg));
    bad += a.str() != b.str();
    std::istringstream in(a.str());
    const SessionLog back = read_session_log(in);
    bad += !(replay_q_table(back) == back.final_q);
  }
  return {bad == 0, fmt("both modes: identical logs and exact replay (%zu failures)", bad)};
}

Outcome t_test_oracle() {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> score(4.0, 1.5), effect(0.6, 0.8);
  double worst_t = 0.0, worst_p = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> mech(23), human(23);
    for (std::size_t k = 0; k < 23; ++k) {
      mech[k] = score(gen);
      human[k] = mech[k] + effect(gen);
    }
    const auto got = stats::paired_t_test(mech, human);
    const auto want = oracle::paired_t(mech, human);
    worst_t = std::max(worst_t, std::fabs(got.t - want.t));
    worst_p = std::max(worst_p, std::fabs(got.p_two_tailed - want.p));
  }
  return {worst_t <= kTTestOracleTolerance && worst_p <= kTTestOracleTolerance,
          fmt("100 datasets, max |dt|=%.2e max |dp|=%.2e", worst_t, worst_p)};
}

}  // namespace

int main() {
  run("p_value_reproduction", p_value_reproduction);
  run("td_oracle_equivalence", td_oracle_equivalence);
  run("convergence_20_seeds", convergence_sweep);
  run("figure2_shape", figure2_shape);
  run("timeline_structure", timeline_structure);
  run("emotion_totality", emotion_totality);
  run("determinism_and_replay", determinism_and_replay);
  run("paired_t_test_oracle", t_test_oracle);
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
