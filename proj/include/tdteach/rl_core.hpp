#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tdteach/rng.hpp"

namespace tdteach {

/// The object-sequence problem: fill `sequence_length` slots, each with one
/// of `num_objects` objects, matching `target_sequence`.
struct TaskSpec {
  std::size_t num_objects = 5;
  std::size_t sequence_length = 5;
  std::vector<std::size_t> target_sequence{3, 1, 4, 0, 2};

  /// Throws PreconditionError when an invariant is broken.
  void validate() const;
};

/// Index of the slot being filled. position == sequence_length is terminal.
struct AgentState {
  std::size_t position = 0;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct Action {
  std::size_t object = 0;

  friend bool operator==(const Action&, const Action&) = default;
};

/// Dense Q(position, object) table, row-major.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t positions, std::size_t objects);
  explicit QTable(const TaskSpec& task) : QTable(task.sequence_length, task.num_objects) {}

  std::size_t positions() const { return positions_; }
  std::size_t objects() const { return objects_; }

  double at(std::size_t position, std::size_t object) const;
  double& at(std::size_t position, std::size_t object);

  std::span<const double> row(std::size_t position) const;
  std::span<const double> values() const { return values_; }

  bool is_terminal(AgentState s) const { return s.position >= positions_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t positions_ = 0;
  std::size_t objects_ = 0;
  std::vector<double> values_;
};

struct LearnerConfig {
  double alpha = 0.5;
  double gamma = 0.9;
  double epsilon_start = 0.3;
  double epsilon_decay = 0.98;
  double epsilon_min = 0.02;
  std::uint64_t rng_seed = 1;

  void validate() const;

  /// max(epsilon_min, epsilon_start * epsilon_decay^episode)
  double epsilon(std::size_t episode) const;
};

struct ActionSelection {
  Action action;
  bool was_greedy = true;
  std::vector<double> q_row;
};

/// One learning step. q_after == q_before + alpha * td_error.
struct TDSignal {
  double reward = 0.0;
  double td_error = 0.0;
  double q_before = 0.0;
  double q_after = 0.0;
  AgentState state;
  Action action;
  AgentState next_state;
};

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> row);

/// Epsilon-greedy choice at `s`.
///
/// Consumes exactly one `uniform01()` draw, then one `below(num_objects)`
/// draw only when exploring (draw < epsilon). Greedy choices break ties by
/// lowest index.
ActionSelection select_action(const QTable& q, AgentState s, const LearnerConfig& cfg,
                              std::size_t episode_index, SplitMix64& rng);

/// Q-learning TD(0) update of the single cell (s, a).
///
/// delta = reward + gamma * max_a' Q(s_next, a') - Q(s, a), with the max term
/// taken as 0 when s_next is terminal.
TDSignal td_update(QTable& q, AgentState s, Action a, double reward, AgentState s_next,
                   const LearnerConfig& cfg);

AgentState advance_state(AgentState s, const TaskSpec& task);

std::vector<std::size_t> greedy_policy(const QTable& q);

}  // namespace tdteach
