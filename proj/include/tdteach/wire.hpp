#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "tdteach/session.hpp"

/// JSON messages exchanged with a live teacher client. Every message is an
/// object with a "type" field.
///
/// Server -> client:
///   session_start {config}
///   phase_start   {episode, trial, position, kind, duration_ms, target,
///                  gaze_target?, face?, certainty?}   (no expression fields in
///                                                     mechanical mode)
///   trial_end     {episode, trial, reward, td_error}
///   trial_aborted {episode, trial, reason}
///   episode_end   {episode, greedy_sequence, converged}
///   session_end   {trials, episodes, convergence_episode, aborted}
///   error         {message}
///
/// Client -> server:
///   feedback {value}                       value clamped to [-100, 100]
///   control  {action: "start"|"pause"|"mode", mode?: "mechanical"|"humanlike"}
namespace tdteach::wire {

nlohmann::json session_start(const SessionConfig& cfg);
nlohmann::json phase_start(const TrialContext& ctx, const Phase& phase);
nlohmann::json trial_end(const TrialLog& trial);
nlohmann::json episode_end(const EpisodeSummary& summary);
nlohmann::json session_end(const SessionLog& log);
nlohmann::json error(std::string_view message);

struct FeedbackMessage {
  double value = 0.0;
};

enum class ControlAction { Start, Pause, Mode };

struct ControlMessage {
  ControlAction action = ControlAction::Start;
  std::optional<Mode> mode;
};

using ClientMessage = std::variant<FeedbackMessage, ControlMessage>;

/// Throws FormatError for malformed, unknown or non-finite messages.
ClientMessage parse_client_message(std::string_view text);

}  // namespace tdteach::wire
