#pragma once

#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "tdteach/session.hpp"

namespace tdteach {

/// Line-delimited JSON session log, one record per line, each tagged by
/// "record":
///
///   header   {"record":"header","format":"tdteach-session-log","version":1,"config":{...}}
///   trial    {"record":"trial","episode","trial","position","action","correct",
///             "was_greedy","epsilon","q_row","plan","timeline","feedback",
///             "reward","td","aborted","abort_reason"}
///   episode  {"record":"episode","episode","greedy_sequence","converged","correct_trials"}
///   footer   {"record":"footer","trials","episodes","convergence_episode",
///             "aborted","q_table"}
///
/// Reals are written in shortest round-trip form, so a log read back holds
/// bit-identical values.
inline constexpr const char* kLogFormat = "tdteach-session-log";
inline constexpr int kLogVersion = 1;

nlohmann::json header_record(const SessionConfig& cfg);
nlohmann::json trial_record(const TrialLog& trial);
nlohmann::json episode_record(const EpisodeSummary& summary);
nlohmann::json footer_record(const SessionLog& log);

TrialLog trial_from_record(const nlohmann::json& j);

/// Writes each record as soon as it is produced and flushes.
class JsonlLogWriter final : public SessionLogSink {
 public:
  explicit JsonlLogWriter(std::ostream& out) : out_(out) {}

  void header(const SessionConfig& cfg) override;
  void trial(const TrialLog& trial) override;
  void episode(const EpisodeSummary& summary) override;
  void footer(const SessionLog& log) override;

 private:
  void emit(const nlohmann::json& j);
  std::ostream& out_;
};

void write_session_log(std::ostream& out, const SessionLog& log);
SessionLog read_session_log(std::istream& in);

void save_session_log(const std::filesystem::path& path, const SessionLog& log);
SessionLog load_session_log(const std::filesystem::path& path);

}  // namespace tdteach
