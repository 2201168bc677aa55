#include "tdteach/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

#include "tdteach/error.hpp"

namespace tdteach {

using nlohmann::json;

namespace {

void require_known_keys(const json& j, std::string_view where,
                        std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw FormatError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw FormatError(std::string(where) + ": unknown key '" + key + "'");
  }
}

double get_real(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw FormatError(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw FormatError(std::string("config: '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::int64_t get_ms(const json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw FormatError(std::string("config: '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

json config_to_json(const SessionConfig& cfg) {
  json j;
  j["mode"] = to_string(cfg.mode);
  j["seed"] = cfg.learner.rng_seed;
  j["max_episodes"] = cfg.max_episodes;
  j["stop_on_convergence"] = cfg.stop_on_convergence;
  j["task"] = {{"num_objects", cfg.task.num_objects},
               {"sequence_length", cfg.task.sequence_length},
               {"target_sequence", cfg.task.target_sequence}};
  j["learner"] = {{"alpha", cfg.learner.alpha},
                  {"gamma", cfg.learner.gamma},
                  {"epsilon_start", cfg.learner.epsilon_start},
                  {"epsilon_decay", cfg.learner.epsilon_decay},
                  {"epsilon_min", cfg.learner.epsilon_min}};
  j["emotion"] = {{"neutral_band", cfg.emotion.neutral_band},
                  {"certainty_gap_threshold", cfg.emotion.certainty_gap_threshold}};
  j["timeline"] = {{"midair_hesitation_ms", cfg.timeline.midair_hesitation_ms},
                   {"gaze_fixation_ms", cfg.timeline.gaze_fixation_ms},
                   {"anticipatory_gaze_ms", cfg.timeline.anticipatory_gaze_ms},
                   {"pointing_ms", cfg.timeline.pointing_ms}};
  if (cfg.teacher) {
    const TeacherModel& t = *cfg.teacher;
    j["teacher"] = {{"reaction_latency_ms", t.reaction_latency_ms},
                    {"correct_value", t.correct_value},
                    {"wrong_value", t.wrong_value},
                    {"hesitation_value_correct", t.hesitation_value_correct},
                    {"hesitation_value_wrong", t.hesitation_value_wrong},
                    {"sample_period_ms", t.sample_period_ms}};
  } else {
    j["teacher"] = "external";
  }
  return j;
}

SessionConfig config_from_json(const json& j) {
  require_known_keys(j, "config", {"mode", "seed", "max_episodes", "stop_on_convergence", "task",
                                   "learner", "emotion", "timeline", "teacher"});
  SessionConfig cfg;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw FormatError("config: 'mode' must be a string");
    cfg.mode = parse_mode(j["mode"].get<std::string>());
  }
  cfg.learner.rng_seed = get_count(j, "seed", cfg.learner.rng_seed);
  cfg.max_episodes = get_count(j, "max_episodes", cfg.max_episodes);
  if (j.contains("stop_on_convergence")) {
    if (!j["stop_on_convergence"].is_boolean()) {
      throw FormatError("config: 'stop_on_convergence' must be a boolean");
    }
    cfg.stop_on_convergence = j["stop_on_convergence"].get<bool>();
  }

  if (j.contains("task")) {
    const json& t = j["task"];
    require_known_keys(t, "config.task", {"num_objects", "sequence_length", "target_sequence"});
    cfg.task.num_objects = get_count(t, "num_objects", cfg.task.num_objects);
    cfg.task.sequence_length = get_count(t, "sequence_length", cfg.task.sequence_length);
    if (t.contains("target_sequence")) {
      const json& seq = t["target_sequence"];
      if (!seq.is_array()) throw FormatError("config: 'target_sequence' must be an array");
      cfg.task.target_sequence.clear();
      for (const json& v : seq) {
        if (!v.is_number_unsigned()) throw FormatError("config: target objects must be indices");
        cfg.task.target_sequence.push_back(v.get<std::size_t>());
      }
    }
  }

  if (j.contains("learner")) {
    const json& l = j["learner"];
    require_known_keys(l, "config.learner",
                       {"alpha", "gamma", "epsilon_start", "epsilon_decay", "epsilon_min"});
    cfg.learner.alpha = get_real(l, "alpha", cfg.learner.alpha);
    cfg.learner.gamma = get_real(l, "gamma", cfg.learner.gamma);
    cfg.learner.epsilon_start = get_real(l, "epsilon_start", cfg.learner.epsilon_start);
    cfg.learner.epsilon_decay = get_real(l, "epsilon_decay", cfg.learner.epsilon_decay);
    cfg.learner.epsilon_min = get_real(l, "epsilon_min", cfg.learner.epsilon_min);
  }

  if (j.contains("emotion")) {
    const json& e = j["emotion"];
    require_known_keys(e, "config.emotion", {"neutral_band", "certainty_gap_threshold"});
    cfg.emotion.neutral_band = get_real(e, "neutral_band", cfg.emotion.neutral_band);
    cfg.emotion.certainty_gap_threshold =
        get_real(e, "certainty_gap_threshold", cfg.emotion.certainty_gap_threshold);
  }

  if (j.contains("timeline")) {
    const json& t = j["timeline"];
    require_known_keys(t, "config.timeline",
                       {"midair_hesitation_ms", "gaze_fixation_ms", "anticipatory_gaze_ms",
                        "pointing_ms"});
    cfg.timeline.midair_hesitation_ms =
        get_ms(t, "midair_hesitation_ms", cfg.timeline.midair_hesitation_ms);
    cfg.timeline.gaze_fixation_ms = get_ms(t, "gaze_fixation_ms", cfg.timeline.gaze_fixation_ms);
    cfg.timeline.anticipatory_gaze_ms =
        get_ms(t, "anticipatory_gaze_ms", cfg.timeline.anticipatory_gaze_ms);
    cfg.timeline.pointing_ms = get_ms(t, "pointing_ms", cfg.timeline.pointing_ms);
  }

  if (j.contains("teacher")) {
    const json& t = j["teacher"];
    if (t.is_string()) {
      if (t.get<std::string>() != "external") {
        throw FormatError("config: 'teacher' must be \"external\" or an object");
      }
      cfg.teacher.reset();
    } else {
      require_known_keys(t, "config.teacher",
                         {"reaction_latency_ms", "correct_value", "wrong_value",
                          "hesitation_value_correct", "hesitation_value_wrong",
                          "sample_period_ms"});
      TeacherModel m;
      m.reaction_latency_ms = get_ms(t, "reaction_latency_ms", m.reaction_latency_ms);
      m.correct_value = get_real(t, "correct_value", m.correct_value);
      m.wrong_value = get_real(t, "wrong_value", m.wrong_value);
      m.hesitation_value_correct =
          get_real(t, "hesitation_value_correct", m.hesitation_value_correct);
      m.hesitation_value_wrong = get_real(t, "hesitation_value_wrong", m.hesitation_value_wrong);
      m.sample_period_ms = get_ms(t, "sample_period_ms", m.sample_period_ms);
      cfg.teacher = m;
    }
  }

  try {
    cfg.validate();
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return cfg;
}

SessionConfig load_session_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace tdteach
