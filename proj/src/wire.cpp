#include "tdteach/wire.hpp"

#include <algorithm>
#include <cmath>

#include "tdteach/config_io.hpp"
#include "tdteach/error.hpp"

namespace tdteach::wire {

using nlohmann::json;

json session_start(const SessionConfig& cfg) {
  return {{"type", "session_start"}, {"config", config_to_json(cfg)}};
}

json phase_start(const TrialContext& ctx, const Phase& phase) {
  json j{{"type", "phase_start"},
         {"episode", ctx.episode},
         {"trial", ctx.trial},
         {"position", ctx.state.position},
         {"kind", to_string(phase.kind)},
         {"duration_ms", phase.duration_ms()},
         {"target", ctx.selection->action.object}};
  const ExpressionPlan& plan = *ctx.plan;
  if (!plan.suppressed()) {
    j["gaze_target"] = plan.gaze_target.object;
    j["face"] = to_string(plan.face);
    j["certainty"] = to_string(plan.certainty);
  }
  return j;
}

json trial_end(const TrialLog& trial) {
  if (trial.aborted) {
    return {{"type", "trial_aborted"},
            {"episode", trial.episode},
            {"trial", trial.trial},
            {"reason", trial.abort_reason}};
  }
  return {{"type", "trial_end"},
          {"episode", trial.episode},
          {"trial", trial.trial},
          {"reward", trial.reward},
          {"td_error", trial.td ? trial.td->td_error : 0.0}};
}

json episode_end(const EpisodeSummary& summary) {
  return {{"type", "episode_end"},
          {"episode", summary.episode},
          {"greedy_sequence", summary.greedy_sequence},
          {"converged", summary.converged}};
}

json session_end(const SessionLog& log) {
  return {{"type", "session_end"},
          {"trials", log.trials.size()},
          {"episodes", log.episodes.size()},
          {"convergence_episode",
           log.convergence_episode ? json(*log.convergence_episode) : json(nullptr)},
          {"aborted", log.aborted}};
}

json error(std::string_view message) {
  return {{"type", "error"}, {"message", std::string(message)}};
}

ClientMessage parse_client_message(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("wire: malformed message: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw FormatError("wire: message must be an object with a string 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "feedback") {
    if (!j.contains("value") || !j["value"].is_number()) {
      throw FormatError("wire: feedback needs a numeric 'value'");
    }
    const double v = j["value"].get<double>();
    if (!std::isfinite(v)) throw FormatError("wire: feedback value must be finite");
    return FeedbackMessage{std::clamp(v, kFeedbackMin, kFeedbackMax)};
  }
  if (type == "control") {
    if (!j.contains("action") || !j["action"].is_string()) {
      throw FormatError("wire: control needs a string 'action'");
    }
    const std::string action = j["action"].get<std::string>();
    ControlMessage msg;
    if (action == "start") {
      msg.action = ControlAction::Start;
    } else if (action == "pause") {
      msg.action = ControlAction::Pause;
    } else if (action == "mode") {
      msg.action = ControlAction::Mode;
      if (!j.contains("mode") || !j["mode"].is_string()) {
        throw FormatError("wire: control mode needs a string 'mode'");
      }
      msg.mode = parse_mode(j["mode"].get<std::string>());
    } else {
      throw FormatError("wire: unknown control action '" + action + "'");
    }
    return msg;
  }
  throw FormatError("wire: unknown message type '" + type + "'");
}

}  // namespace tdteach::wire
