#include "tdteach/session_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "tdteach/config_io.hpp"
#include "tdteach/error.hpp"

namespace tdteach {

using nlohmann::json;

namespace {

json plan_to_json(const ExpressionPlan& p) {
  return {{"mode", to_string(p.mode)},
          {"certainty", to_string(p.certainty)},
          {"face", to_string(p.face)},
          {"gaze_target", p.gaze_target.object},
          {"suppressed", p.suppressed()}};
}

ExpressionPlan plan_from_json(const json& j) {
  ExpressionPlan p;
  p.mode = parse_mode(j.at("mode").get<std::string>());
  p.certainty = parse_certainty(j.at("certainty").get<std::string>());
  p.face = parse_face(j.at("face").get<std::string>());
  p.gaze_target = Action{j.at("gaze_target").get<std::size_t>()};
  return p;
}

json td_to_json(const TDSignal& s) {
  return {{"reward", s.reward},
          {"td_error", s.td_error},
          {"q_before", s.q_before},
          {"q_after", s.q_after},
          {"state", s.state.position},
          {"action", s.action.object},
          {"next_state", s.next_state.position}};
}

TDSignal td_from_json(const json& j) {
  TDSignal s;
  s.reward = j.at("reward").get<double>();
  s.td_error = j.at("td_error").get<double>();
  s.q_before = j.at("q_before").get<double>();
  s.q_after = j.at("q_after").get<double>();
  s.state = AgentState{j.at("state").get<std::size_t>()};
  s.action = Action{j.at("action").get<std::size_t>()};
  s.next_state = AgentState{j.at("next_state").get<std::size_t>()};
  return s;
}

}  // namespace

json header_record(const SessionConfig& cfg) {
  return {{"record", "header"},
          {"format", kLogFormat},
          {"version", kLogVersion},
          {"config", config_to_json(cfg)}};
}

json trial_record(const TrialLog& t) {
  json timeline = json::array();
  for (const Phase& p : t.timeline.phases) {
    timeline.push_back({{"kind", to_string(p.kind)}, {"start_ms", p.start_ms}, {"end_ms", p.end_ms}});
  }
  json samples = json::array();
  for (const FeedbackSample& s : t.feedback.samples()) {
    samples.push_back(json::array({s.timestamp_ms, s.value}));
  }
  return {{"record", "trial"},
          {"episode", t.episode},
          {"trial", t.trial},
          {"position", t.state.position},
          {"action", t.selection.action.object},
          {"correct", t.correct},
          {"was_greedy", t.selection.was_greedy},
          {"epsilon", t.epsilon},
          {"q_row", t.selection.q_row},
          {"plan", plan_to_json(t.plan)},
          {"timeline", timeline},
          {"feedback",
           {{"start_ms", t.feedback.start_ms()},
            {"end_ms", t.feedback.end_ms()},
            {"dropped", t.feedback.dropped()},
            {"samples", samples}}},
          {"reward", t.reward},
          {"td", t.td ? td_to_json(*t.td) : json(nullptr)},
          {"aborted", t.aborted},
          {"abort_reason", t.abort_reason}};
}

json episode_record(const EpisodeSummary& s) {
  return {{"record", "episode"},
          {"episode", s.episode},
          {"greedy_sequence", s.greedy_sequence},
          {"converged", s.converged},
          {"correct_trials", s.correct_trials}};
}

json footer_record(const SessionLog& log) {
  json table = json::array();
  for (std::size_t p = 0; p < log.final_q.positions(); ++p) {
    const auto row = log.final_q.row(p);
    table.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"record", "footer"},
          {"trials", log.trials.size()},
          {"episodes", log.episodes.size()},
          {"convergence_episode",
           log.convergence_episode ? json(*log.convergence_episode) : json(nullptr)},
          {"aborted", log.aborted},
          {"q_table", table}};
}

TrialLog trial_from_record(const json& j) {
  TrialLog t;
  t.episode = j.at("episode").get<std::size_t>();
  t.trial = j.at("trial").get<std::size_t>();
  t.state = AgentState{j.at("position").get<std::size_t>()};
  t.selection.action = Action{j.at("action").get<std::size_t>()};
  t.selection.was_greedy = j.at("was_greedy").get<bool>();
  t.selection.q_row = j.at("q_row").get<std::vector<double>>();
  t.correct = j.at("correct").get<bool>();
  t.epsilon = j.at("epsilon").get<double>();
  t.plan = plan_from_json(j.at("plan"));

  std::int64_t prev_end = 0;
  for (const json& p : j.at("timeline")) {
    Phase ph{parse_phase_kind(p.at("kind").get<std::string>()), p.at("start_ms").get<std::int64_t>(),
             p.at("end_ms").get<std::int64_t>()};
    if (ph.start_ms != prev_end || ph.end_ms <= ph.start_ms) {
      throw FormatError("log: trial " + std::to_string(t.trial) + " has a non-contiguous timeline");
    }
    prev_end = ph.end_ms;
    t.timeline.phases.push_back(ph);
  }
  t.timeline.total_ms = prev_end;

  const json& fb = j.at("feedback");
  std::vector<FeedbackSample> samples;
  for (const json& s : fb.at("samples")) {
    samples.push_back({s.at(0).get<std::int64_t>(), s.at(1).get<double>()});
  }
  t.feedback = FeedbackWindow::restore(fb.at("start_ms").get<std::int64_t>(),
                                       fb.at("end_ms").get<std::int64_t>(), std::move(samples),
                                       fb.at("dropped").get<std::size_t>());
  t.reward = j.at("reward").get<double>();
  if (!j.at("td").is_null()) t.td = td_from_json(j.at("td"));
  t.aborted = j.at("aborted").get<bool>();
  t.abort_reason = j.at("abort_reason").get<std::string>();
  return t;
}

void JsonlLogWriter::emit(const json& j) {
  out_ << j.dump() << '\n';
  out_.flush();
}

void JsonlLogWriter::header(const SessionConfig& cfg) { emit(header_record(cfg)); }
void JsonlLogWriter::trial(const TrialLog& trial) { emit(trial_record(trial)); }
void JsonlLogWriter::episode(const EpisodeSummary& summary) { emit(episode_record(summary)); }
void JsonlLogWriter::footer(const SessionLog& log) { emit(footer_record(log)); }

void write_session_log(std::ostream& out, const SessionLog& log) {
  JsonlLogWriter w(out);
  w.header(log.config);
  // Records are interleaved as the engine emits them: an episode's trials,
  // then its summary.
  std::size_t next_trial = 0;
  for (const EpisodeSummary& ep : log.episodes) {
    while (next_trial < log.trials.size() && log.trials[next_trial].episode == ep.episode) {
      w.trial(log.trials[next_trial++]);
    }
    w.episode(ep);
  }
  while (next_trial < log.trials.size()) w.trial(log.trials[next_trial++]);
  w.footer(log);
}

SessionLog read_session_log(std::istream& in) {
  SessionLog log;
  bool have_header = false;
  bool have_footer = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (have_footer) throw FormatError("log: records after footer");
    try {
      const json j = json::parse(line);
      const std::string kind = j.at("record").get<std::string>();
      if (kind == "header") {
        if (have_header) throw FormatError("duplicate header");
        if (j.at("format").get<std::string>() != kLogFormat || j.at("version").get<int>() != kLogVersion) {
          throw FormatError("unsupported log format");
        }
        log.config = config_from_json(j.at("config"));
        have_header = true;
      } else if (!have_header) {
        throw FormatError("record before header");
      } else if (kind == "trial") {
        log.trials.push_back(trial_from_record(j));
      } else if (kind == "episode") {
        EpisodeSummary s;
        s.episode = j.at("episode").get<std::size_t>();
        s.greedy_sequence = j.at("greedy_sequence").get<std::vector<std::size_t>>();
        s.converged = j.at("converged").get<bool>();
        s.correct_trials = j.at("correct_trials").get<std::size_t>();
        log.episodes.push_back(std::move(s));
      } else if (kind == "footer") {
        const auto rows = j.at("q_table").get<std::vector<std::vector<double>>>();
        log.final_q = QTable(log.config.task);
        if (rows.size() != log.final_q.positions()) throw FormatError("q_table shape mismatch");
        for (std::size_t p = 0; p < rows.size(); ++p) {
          if (rows[p].size() != log.final_q.objects()) throw FormatError("q_table shape mismatch");
          for (std::size_t o = 0; o < rows[p].size(); ++o) log.final_q.at(p, o) = rows[p][o];
        }
        if (!j.at("convergence_episode").is_null()) {
          log.convergence_episode = j.at("convergence_episode").get<std::size_t>();
        }
        log.aborted = j.at("aborted").get<bool>();
        if (j.at("trials").get<std::size_t>() != log.trials.size() ||
            j.at("episodes").get<std::size_t>() != log.episodes.size()) {
          throw FormatError("footer counts do not match the records");
        }
        have_footer = true;
      } else {
        throw FormatError("unknown record '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw FormatError("log line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw FormatError("log: missing header");
  if (!have_footer) throw FormatError("log: missing footer (incomplete session)");
  return log;
}

void save_session_log(const std::filesystem::path& path, const SessionLog& log) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write log " + path.string());
  write_session_log(out, log);
}

SessionLog load_session_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open log " + path.string());
  return read_session_log(in);
}

}  // namespace tdteach
