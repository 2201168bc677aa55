#include "tdteach/rl_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdteach/error.hpp"

namespace tdteach {

void TaskSpec::validate() const {
  if (num_objects < 2) throw PreconditionError("task: num_objects must be >= 2");
  if (sequence_length < 1) throw PreconditionError("task: sequence_length must be >= 1");
  if (target_sequence.size() != sequence_length) {
    throw PreconditionError("task: target_sequence length " +
                            std::to_string(target_sequence.size()) +
                            " != sequence_length " + std::to_string(sequence_length));
  }
  for (std::size_t obj : target_sequence) {
    if (obj >= num_objects) {
      throw PreconditionError("task: target object " + std::to_string(obj) + " out of range");
    }
  }
}

QTable::QTable(std::size_t positions, std::size_t objects)
    : positions_(positions), objects_(objects), values_(positions * objects, 0.0) {}

double QTable::at(std::size_t position, std::size_t object) const {
  if (position >= positions_ || object >= objects_) {
    throw PreconditionError("q-table index out of range");
  }
  return values_[position * objects_ + object];
}

double& QTable::at(std::size_t position, std::size_t object) {
  if (position >= positions_ || object >= objects_) {
    throw PreconditionError("q-table index out of range");
  }
  return values_[position * objects_ + object];
}

std::span<const double> QTable::row(std::size_t position) const {
  if (position >= positions_) throw PreconditionError("q-table row out of range");
  return std::span<const double>(values_).subspan(position * objects_, objects_);
}

void LearnerConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("learner: alpha must be in (0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw PreconditionError("learner: gamma must be in [0,1]");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(epsilon_start) || !unit(epsilon_decay) || !unit(epsilon_min)) {
    throw PreconditionError("learner: epsilon schedule values must be in [0,1]");
  }
  if (epsilon_min > epsilon_start) {
    throw PreconditionError("learner: epsilon_min must not exceed epsilon_start");
  }
}

double LearnerConfig::epsilon(std::size_t episode) const {
  const double decayed = epsilon_start * std::pow(epsilon_decay, static_cast<double>(episode));
  return std::max(epsilon_min, decayed);
}

std::size_t argmax_lowest(std::span<const double> row) {
  if (row.empty()) throw PreconditionError("argmax of empty row");
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

ActionSelection select_action(const QTable& q, AgentState s, const LearnerConfig& cfg,
                              std::size_t episode_index, SplitMix64& rng) {
  if (q.is_terminal(s)) throw PreconditionError("select_action: terminal state");
  ActionSelection sel;
  const auto row = q.row(s.position);
  sel.q_row.assign(row.begin(), row.end());
  if (rng.uniform01() < cfg.epsilon(episode_index)) {
    sel.action = Action{rng.below(q.objects())};
    sel.was_greedy = false;
  } else {
    sel.action = Action{argmax_lowest(row)};
    sel.was_greedy = true;
  }
  return sel;
}

TDSignal td_update(QTable& q, AgentState s, Action a, double reward, AgentState s_next,
                   const LearnerConfig& cfg) {
  if (q.is_terminal(s)) throw PreconditionError("td_update: terminal state");
  if (a.object >= q.objects()) throw PreconditionError("td_update: action out of range");
  if (s_next.position > q.positions()) throw PreconditionError("td_update: next state out of range");
  if (!std::isfinite(reward) || reward < -1.0 || reward > 1.0) {
    throw PreconditionError("td_update: reward must be in [-1,1]");
  }

  double next_value = 0.0;
  if (!q.is_terminal(s_next)) {
    const auto next_row = q.row(s_next.position);
    next_value = *std::max_element(next_row.begin(), next_row.end());
  }

  double& cell = q.at(s.position, a.object);
  TDSignal sig;
  sig.reward = reward;
  sig.state = s;
  sig.action = a;
  sig.next_state = s_next;
  sig.q_before = cell;
  sig.td_error = reward + cfg.gamma * next_value - cell;
  cell = cell + cfg.alpha * sig.td_error;
  sig.q_after = cell;
  return sig;
}

AgentState advance_state(AgentState s, const TaskSpec& task) {
  if (s.position >= task.sequence_length) {
    throw PreconditionError("advance_state: state is already terminal");
  }
  return AgentState{s.position + 1};
}

std::vector<std::size_t> greedy_policy(const QTable& q) {
  std::vector<std::size_t> out;
  out.reserve(q.positions());
  for (std::size_t p = 0; p < q.positions(); ++p) out.push_back(argmax_lowest(q.row(p)));
  return out;
}

}  // namespace tdteach
