#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdteach/analysis.hpp"
#include "tdteach/config_io.hpp"
#include "tdteach/error.hpp"
#include "tdteach/report.hpp"
#include "tdteach/session_log.hpp"

#ifdef TDTEACH_HAVE_LIVE
#include "tdteach/live_server.hpp"
#endif

namespace fs = std::filesystem;
using namespace tdteach;

namespace {

SessionConfig config_or_default(const std::string& path) {
  return path.empty() ? SessionConfig{} : load_session_config(path);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int cmd_simulate(const std::string& config_path, const std::optional<std::string>& mode,
                 const std::optional<std::uint64_t>& seed, const std::string& out_path) {
  SessionConfig cfg = config_or_default(config_path);
  if (mode) cfg.mode = parse_mode(*mode);
  if (seed) cfg.learner.rng_seed = *seed;
  if (!cfg.teacher) cfg.teacher = TeacherModel{};

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file = open_out(out_path);
    out = &file;
  }
  JsonlLogWriter writer(*out);
  const SessionLog log = simulate_session(cfg, &writer);
  std::cerr << "simulate: " << to_string(cfg.mode) << " seed " << cfg.learner.rng_seed << ", "
            << log.trials.size() << " trials, ";
  if (log.convergence_episode) {
    std::cerr << "converged at episode " << *log.convergence_episode << "\n";
  } else {
    std::cerr << "not converged after " << log.episodes.size() << " episodes\n";
  }
  return 0;
}

int cmd_serve(const std::string& config_path, std::uint16_t port, const std::string& bind,
              const std::string& static_dir, const std::string& log_dir) {
#ifdef TDTEACH_HAVE_LIVE
  LiveServerOptions opts;
  opts.config = config_or_default(config_path);
  opts.port = port;
  opts.bind_address = bind;
  opts.static_dir = static_dir;
  opts.log_dir = log_dir;
  fs::create_directories(opts.log_dir);
  LiveServer server(opts);
  const auto bound = server.start();
  std::cerr << "serve: listening on ws://" << bind << ":" << bound << "/ws"
            << (static_dir.empty() ? "" : " (static files from " + static_dir + ")") << "\n";
  server.wait();
  server.stop();
  for (const auto& p : server.completed_logs()) std::cerr << "serve: wrote " << p.string() << "\n";
  return 0;
#else
  (void)config_path, (void)port, (void)bind, (void)static_dir, (void)log_dir;
  std::cerr << "serve: built without live server support\n";
  return 1;
#endif
}

std::vector<SessionLog> load_logs(const std::vector<std::string>& paths) {
  std::vector<SessionLog> logs;
  for (const auto& p : paths) logs.push_back(load_session_log(p));
  return logs;
}

int cmd_analyze(const std::vector<std::string>& paths, const std::string& out_dir,
                std::size_t bins, double threshold) {
  const auto logs = load_logs(paths);
  fs::create_directories(out_dir);
  std::vector<analysis::OnsetRow> rows;
  for (const auto cond : analysis::kAllConditions) {
    analysis::AveragedTrace trace;
    try {
      trace = analysis::average_trace(logs, cond, bins);
    } catch (const PreconditionError&) {
      continue;  // no trials in this condition
    }
    auto out = open_out(fs::path(out_dir) / ("trace_" + std::string(to_string(cond)) + ".csv"));
    analysis::write_trace_csv(out, trace);
    rows.push_back({cond, trace.trials, analysis::feedback_onset(trace, threshold), trace.boundaries});
  }
  auto out = open_out(fs::path(out_dir) / "onsets.csv");
  analysis::write_onsets_csv(out, rows);
  std::cerr << "analyze: " << logs.size() << " logs, " << rows.size() << " conditions -> "
            << out_dir << "\n";
  return 0;
}

void write_log_summary(std::ostream& out, const std::vector<std::string>& paths) {
  out << "log,mode,seed,trials,episodes,convergence_episode,aborted,correct_rate,mean_reward\n";
  for (const auto& p : paths) {
    const SessionLog log = load_session_log(p);
    std::size_t done = 0, correct = 0;
    double reward = 0.0;
    for (const auto& t : log.trials) {
      if (t.aborted) continue;
      ++done;
      correct += t.correct;
      reward += t.reward;
    }
    out << p << ',' << to_string(log.config.mode) << ',' << log.config.learner.rng_seed << ','
        << log.trials.size() << ',' << log.episodes.size() << ',';
    if (log.convergence_episode) out << *log.convergence_episode;
    out << ',' << (log.aborted ? "true" : "false") << ',';
    if (done > 0) out << static_cast<double>(correct) / done << ',' << reward / done;
    else out << ',';
    out << '\n';
  }
}

int cmd_report(const std::string& pairs, const std::vector<std::string>& logs,
               const std::string& out_path) {
  if (pairs.empty() && logs.empty()) throw CLI::ValidationError("report", "give --pairs and/or logs");
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file = open_out(out_path);
    out = &file;
  }
  if (!pairs.empty()) {
    std::ifstream in(pairs);
    if (!in) throw std::runtime_error("cannot read " + pairs);
    stats::write_report_csv(*out, stats::paired_report(stats::read_pairs_csv(in)));
  }
  if (!pairs.empty() && !logs.empty()) *out << '\n';
  if (!logs.empty()) write_log_summary(*out, logs);
  return 0;
}

int cmd_replay(const std::string& path) {
  const SessionLog log = load_session_log(path);
  const QTable q = replay_q_table(log);
  if (!(q == log.final_q)) {
    std::cerr << "replay: final Q table differs from the log\n";
    return 1;
  }
  std::cout << "replay: " << path << " ok (" << log.trials.size() << " trials)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teaching a robot a sequence with TD learning and expressive feedback"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "Run one session against the simulated teacher");
  simulate->add_option("--config", config_path, "Session config JSON")->check(CLI::ExistingFile);
  simulate->add_option("--mode", mode, "mechanical | humanlike")
      ->check(CLI::IsMember({"mechanical", "humanlike"}));
  simulate->add_option("--seed", seed, "Learner RNG seed");
  simulate->add_option("--out", out_path, "Session log (JSONL); '-' for stdout");

  std::uint16_t port = 8080;
  std::string bind = "127.0.0.1", static_dir, log_dir = ".";
  auto* serve = app.add_subcommand("serve", "Run live sessions for a web-socket teacher client");
  serve->add_option("--config", config_path, "Session config JSON")->check(CLI::ExistingFile);
  serve->add_option("--port", port, "Port (0 = any free port)");
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--static", static_dir, "Directory of UI assets to serve")
      ->check(CLI::ExistingDirectory);
  serve->add_option("--log-dir", log_dir, "Where session logs are written");

  std::vector<std::string> log_paths;
  std::string out_dir = ".";
  std::size_t bins = analysis::kDefaultBinsPerPhase;
  double threshold = analysis::kDefaultOnsetThreshold;
  auto* analyze = app.add_subcommand("analyze", "Phase-aligned average feedback traces");
  analyze->add_option("logs", log_paths, "Session logs")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", out_dir, "Output directory");
  analyze->add_option("--bins", bins, "Bins per phase")->check(CLI::PositiveNumber);
  analyze->add_option("--threshold", threshold, "Onset magnitude threshold")
      ->check(CLI::NonNegativeNumber);

  std::string pairs;
  auto* report = app.add_subcommand("report", "Paired t-tests and/or session log summaries");
  report->add_option("--pairs", pairs, "CSV: item,participant,mechanical,humanlike")
      ->check(CLI::ExistingFile);
  report->add_option("logs", log_paths, "Session logs")->check(CLI::ExistingFile);
  report->add_option("--out", out_path, "Output CSV; default stdout");

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Re-run a log's TD updates and check the final Q table");
  replay->add_option("log", replay_path, "Session log")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(config_path, mode, seed, out_path);
    if (*serve) return cmd_serve(config_path, port, bind, static_dir, log_dir);
    if (*analyze) return cmd_analyze(log_paths, out_dir, bins, threshold);
    if (*report) return cmd_report(pairs, log_paths, out_path);
    if (*replay) return cmd_replay(replay_path);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "tdteach: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
