#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "bandit_coord/learners.hpp"
#include "bandit_coord/rng.hpp"
#include "bandit_coord/submodular.hpp"
#include "bandit_coord/types.hpp"

namespace bandit_coord {

enum class Algorithm { SG, BSG, MetaBSG, CommandOnly };
const char* to_string(Algorithm a);

// External command stream: one complete joint action per step. Sources may
// hold state (e.g. waypoint cursors); they are per-episode objects.
using CommandSource = std::function<JointAction(int t)>;

// A step-based environment that serves the normalized objective.
// Protocol per step t: (command sources may read state) -> execute(t, a)
// -> any number of evaluate(t, .) calls -> advance(t).
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int num_agents() const = 0;
  virtual ActionSpace action_space() const = 0;
  virtual int horizon() const = 0;

  // Re-seeds environment randomness and restores the initial state.
  virtual void reset(uint64_t seed) = 0;

  // Commits the executed joint action for step t (moves agents, senses).
  virtual void execute(int t, const JointAction& executed) = 0;

  // Normalized objective value in [0,1] for the current step. Only valid
  // after execute(t, .); pure given (t, a) until advance(t).
  virtual double evaluate(int t, const JointAction& a) const = 0;

  // Full-information planning objective for step t, valid before execute.
  // Defaults to the bandit objective (exact for predefined objectives).
  virtual double plan_evaluate(int t, const JointAction& a) const {
    return evaluate(t, a);
  }

  // Finishes step t (e.g. moves targets for the next step).
  virtual void advance(int t) = 0;

  // Environment-specific scalar recorded per step (NaN when undefined).
  virtual double step_metric() const {
    return std::numeric_limits<double>::quiet_NaN();
  }
};

// Wraps a predefined SetFunction; execute/advance are no-ops.
class StaticEnvironment final : public Environment {
 public:
  StaticEnvironment(SetFunction f, ActionSpace space);

  int num_agents() const override;
  ActionSpace action_space() const override;
  int horizon() const override;
  void reset(uint64_t) override {}
  void execute(int, const JointAction&) override {}
  double evaluate(int t, const JointAction& a) const override;
  void advance(int) override {}

 private:
  SetFunction f_;
  ActionSpace space_;
};

// Forces the meta learner's strategy draw (diagnostics and tests).
enum class MetaPin { kNone, kBsg, kExtComm };

struct CoordinatorConfig {
  int horizon = 0;
  std::vector<int> ordering;  // empty => agents in index order
  MetaUpdateMode meta_update_mode = MetaUpdateMode::kPaper;
  uint64_t seed = 0;
  MetaPin pin = MetaPin::kNone;
  // Records the full per-step table of complete-joint-action values
  // (omniscient instrumentation for the hindsight oracle; bypasses the gate).
  bool record_value_tables = false;
};

struct StepRecord {
  int t = 0;
  JointAction bsg_draw;   // default-empty when the algorithm draws none
  JointAction command;    // default-empty when no command stream
  JointAction executed;
  std::optional<Strategy> strategy;  // MetaBSG only
  std::vector<double> per_agent_reward;  // indexed by agent id
  double total_value = 0.0;              // f_t(executed), normalized
  std::optional<std::array<double, 2>> meta_distribution;  // q_t snapshot
  std::vector<std::vector<double>> agent_distributions;    // p_t^(i) snapshots
  std::vector<JointAction> query_log;  // gated queries made this step
  double step_metric = std::numeric_limits<double>::quiet_NaN();
};

struct EpisodeTrace {
  Algorithm algorithm = Algorithm::BSG;
  CoordinatorConfig config;
  ActionSpace space;
  std::vector<StepRecord> steps;
  long gated_evaluations = 0;
  long meta_updates = 0;
  // Filled when config.record_value_tables: per step, value of every
  // complete joint action, indexed by complete_index().
  std::vector<std::vector<double>> value_tables;

  double total_value() const;
  std::vector<double> step_values() const;
};

// Offline Sequential Greedy: each agent in order picks the action of maximal
// marginal gain given its predecessors; ties broken by lowest action index.
// Requires full-information access to f_t (no gate).
JointAction sequential_greedy(const SetFunction& f, int t,
                              const ActionSpace& space,
                              const std::vector<int>& ordering = {});

// One bandit-sequential-greedy step: draw from each agent's distribution,
// execute, then walk the prefix chain through the gate, rewarding each agent
// with its marginal gain. The returned per-agent rewards telescope to the
// executed set's value.
StepRecord bsg_step(std::vector<AgentLearner>& learners, Environment& env,
                    int t, const std::vector<int>& ordering,
                    std::vector<RngStream>& agent_streams);

// One arbitrated step: draw BSG candidates, receive the external command,
// draw a strategy from the meta distribution, execute the selected joint
// action, reward the agent learners with marginal gains of the executed
// actions, and feed the executed set's value to the meta learner.
StepRecord metabsg_step(MetaLearner& meta, std::vector<AgentLearner>& learners,
                        Environment& env, int t, const JointAction& command,
                        const std::vector<int>& ordering,
                        std::vector<RngStream>& agent_streams,
                        RngStream& meta_stream, MetaPin pin = MetaPin::kNone);

// Runs a full episode. Deterministic given (algorithm, env, config.seed).
// `commands` is required for MetaBSG and CommandOnly.
EpisodeTrace run_episode(Algorithm alg, Environment& env,
                         const CoordinatorConfig& cfg,
                         const CommandSource* commands = nullptr);

}  // namespace bandit_coord
