#pragma once

#include <filesystem>

#include "json.hpp"
#include "tdteach/session.hpp"

namespace tdteach {

/// Session config file (JSON). Every key is optional and defaults to the
/// SessionConfig default; unknown keys are rejected with FormatError.
///
///   {
///     "mode": "humanlike" | "mechanical",
///     "seed": <uint64>,
///     "max_episodes": <count>,
///     "stop_on_convergence": <bool>,
///     "task":     {"num_objects", "sequence_length", "target_sequence"},
///     "learner":  {"alpha", "gamma", "epsilon_start", "epsilon_decay", "epsilon_min"},
///     "emotion":  {"neutral_band", "certainty_gap_threshold"},
///     "timeline": {"midair_hesitation_ms", "gaze_fixation_ms",
///                  "anticipatory_gaze_ms", "pointing_ms"},
///     "teacher":  "external" | {"reaction_latency_ms", "correct_value", "wrong_value",
///                               "hesitation_value_correct", "hesitation_value_wrong",
///                               "sample_period_ms"}
///   }
nlohmann::json config_to_json(const SessionConfig& cfg);
SessionConfig config_from_json(const nlohmann::json& j);

SessionConfig load_session_config(const std::filesystem::path& path);

}  // namespace tdteach
