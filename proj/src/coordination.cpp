#include "bandit_coord/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bandit_coord {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SG: return "SG-oracle";
    case Algorithm::BSG: return "BSG";
    case Algorithm::MetaBSG: return "MetaBSG";
    case Algorithm::CommandOnly: return "CommandOnly";
  }
  return "?";
}

StaticEnvironment::StaticEnvironment(SetFunction f, ActionSpace space)
    : f_(std::move(f)), space_(std::move(space)) {}

int StaticEnvironment::num_agents() const {
  return static_cast<int>(space_.size());
}

ActionSpace StaticEnvironment::action_space() const { return space_; }

int StaticEnvironment::horizon() const { return f_.horizon; }

double StaticEnvironment::evaluate(int t, const JointAction& a) const {
  return f_.evaluate(t, a);
}

double EpisodeTrace::total_value() const {
  double total = 0.0;
  for (const StepRecord& s : steps) total += s.total_value;
  return total;
}

std::vector<double> EpisodeTrace::step_values() const {
  std::vector<double> v(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) v[i] = steps[i].total_value;
  return v;
}

namespace {

std::vector<int> resolve_ordering(const std::vector<int>& ordering, int n) {
  if (ordering.empty()) {
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  if (static_cast<int>(ordering.size()) != n) {
    throw std::invalid_argument("ordering is not a permutation of the agents");
  }
  std::vector<bool> seen(n, false);
  for (int i : ordering) {
    if (i < 0 || i >= n || seen[i]) {
      throw std::invalid_argument("ordering is not a permutation of the agents");
    }
    seen[i] = true;
  }
  return ordering;
}

SetFunction bandit_view(const Environment& env) {
  SetFunction f;
  f.horizon = env.horizon();
  f.per_step_upper_bound = 1.0;
  f.evaluate = [&env](int t, const JointAction& a) { return env.evaluate(t, a); };
  return f;
}

SetFunction plan_view(const Environment& env) {
  SetFunction f;
  f.horizon = env.horizon();
  f.per_step_upper_bound = 1.0;
  f.evaluate = [&env](int t, const JointAction& a) {
    return env.plan_evaluate(t, a);
  };
  return f;
}

JointAction draw_joint_action(const std::vector<AgentLearner>& learners,
                              std::vector<RngStream>& agent_streams) {
  const int n = static_cast<int>(learners.size());
  JointAction a(n);
  for (int i = 0; i < n; ++i) {
    a.assign(i, agent_streams[i].categorical(learners[i].distribution()));
  }
  return a;
}

double clamped_reward(double raw_gain) {
  // Telescoping must survive intact, so only float dust is clamped away.
  if (raw_gain < -1e-9 || raw_gain > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "per-agent reward " << raw_gain
       << " outside [0,1]; objective is not a normalized monotone function";
    throw ContractError(os.str());
  }
  return std::clamp(raw_gain, 0.0, 1.0);
}

// Shared tail of bsg_step / metabsg_step: walk the prefix chain of the
// executed actions through the gate, reward each agent with its marginal
// gain, and update its learner.
void chain_and_update(std::vector<AgentLearner>& learners, Environment& env,
                      int t, const std::vector<int>& ordering,
                      StepRecord& record) {
  const int n = static_cast<int>(learners.size());
  const SetFunction f = bandit_view(env);
  FeedbackGate gate(record.executed);

  record.per_agent_reward.assign(n, 0.0);
  JointAction prefix(n);
  double prev_value = 0.0;  // f_t(empty) = 0 by normalization
  for (int agent : ordering) {
    prefix.assign(agent, record.executed.action(agent));
    const double value = gate.evaluate(f, t, prefix);
    const double reward = clamped_reward(value - prev_value);
    record.per_agent_reward[agent] = reward;
    learners[agent].update(record.executed.action(agent), reward);
    prev_value = value;
  }
  record.total_value = prev_value;
  record.query_log = gate.query_log();
}

void snapshot_distributions(const std::vector<AgentLearner>& learners,
                            StepRecord& record) {
  record.agent_distributions.reserve(learners.size());
  for (const AgentLearner& l : learners) {
    record.agent_distributions.push_back(l.distribution());
  }
}

}  // namespace

JointAction sequential_greedy(const SetFunction& f, int t,
                              const ActionSpace& space,
                              const std::vector<int>& ordering) {
  const int n = static_cast<int>(space.size());
  const std::vector<int> order = resolve_ordering(ordering, n);
  JointAction chosen(n);
  double current = f.evaluate(t, chosen);
  for (int agent : order) {
    if (space[agent] < 1) {
      throw std::invalid_argument("sequential_greedy: empty action set");
    }
    int best_action = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < space[agent]; ++v) {
      const double value = f.evaluate(t, chosen.with(agent, v));
      if (value > best_value) {  // strict: ties keep the lowest index
        best_value = value;
        best_action = v;
      }
    }
    chosen.assign(agent, best_action);
    current = best_value;
  }
  (void)current;
  return chosen;
}

StepRecord bsg_step(std::vector<AgentLearner>& learners, Environment& env,
                    int t, const std::vector<int>& ordering,
                    std::vector<RngStream>& agent_streams) {
  StepRecord record;
  record.t = t;
  snapshot_distributions(learners, record);
  record.bsg_draw = draw_joint_action(learners, agent_streams);
  record.executed = record.bsg_draw;
  env.execute(t, record.executed);
  chain_and_update(learners, env, t, ordering, record);
  return record;
}

StepRecord metabsg_step(MetaLearner& meta, std::vector<AgentLearner>& learners,
                        Environment& env, int t, const JointAction& command,
                        const std::vector<int>& ordering,
                        std::vector<RngStream>& agent_streams,
                        RngStream& meta_stream, MetaPin pin) {
  if (!command.complete()) {
    throw std::invalid_argument("metabsg_step: command must be complete");
  }
  StepRecord record;
  record.t = t;
  snapshot_distributions(learners, record);
  record.bsg_draw = draw_joint_action(learners, agent_streams);
  record.command = command;

  const auto q = meta.distribution();
  record.meta_distribution = q;
  switch (pin) {
    case MetaPin::kBsg:
      record.strategy = Strategy::BSG;
      break;
    case MetaPin::kExtComm:
      record.strategy = Strategy::ExtComm;
      break;
    case MetaPin::kNone: {
      const int drawn = meta_stream.categorical({q[0], q[1]});
      record.strategy = static_cast<Strategy>(drawn);
      break;
    }
  }
  record.executed =
      (*record.strategy == Strategy::BSG) ? record.bsg_draw : command;

  env.execute(t, record.executed);
  chain_and_update(learners, env, t, ordering, record);
  // The meta learner is fed the full executed set's value, which the chain
  // already observed as its last prefix.
  meta.update(*record.strategy, record.total_value);
  return record;
}

EpisodeTrace run_episode(Algorithm alg, Environment& env,
                         const CoordinatorConfig& cfg,
                         const CommandSource* commands) {
  const int n = env.num_agents();
  const ActionSpace space = env.action_space();
  const int horizon = cfg.horizon > 0 ? cfg.horizon : env.horizon();
  if (horizon > env.horizon()) {
    throw std::invalid_argument("run_episode: horizon exceeds environment's");
  }
  const std::vector<int> ordering = resolve_ordering(cfg.ordering, n);
  const bool needs_commands =
      alg == Algorithm::MetaBSG || alg == Algorithm::CommandOnly;
  if (needs_commands && commands == nullptr) {
    throw std::invalid_argument("run_episode: algorithm requires a command source");
  }

  EpisodeTrace trace;
  trace.algorithm = alg;
  trace.config = cfg;
  trace.config.horizon = horizon;
  trace.space = space;
  trace.steps.reserve(horizon);

  env.reset(mix_seed(cfg.seed, kEnvNoiseStream));

  std::vector<AgentLearner> learners;
  std::vector<RngStream> agent_streams;
  MetaLearner meta;
  RngStream meta_stream(cfg.seed, kMetaStream);
  if (alg == Algorithm::BSG || alg == Algorithm::MetaBSG) {
    learners.reserve(n);
    agent_streams.reserve(n);
    for (int i = 0; i < n; ++i) {
      learners.push_back(AgentLearner::make(space[i], horizon));
      agent_streams.emplace_back(cfg.seed, kAgentStreamBase + i);
    }
  }
  if (alg == Algorithm::MetaBSG) {
    meta = MetaLearner::make(horizon, cfg.meta_update_mode);
  }

  for (int t = 1; t <= horizon; ++t) {
    StepRecord record;
    switch (alg) {
      case Algorithm::BSG:
        record = bsg_step(learners, env, t, ordering, agent_streams);
        break;
      case Algorithm::MetaBSG: {
        const JointAction command = (*commands)(t);
        record = metabsg_step(meta, learners, env, t, command, ordering,
                              agent_streams, meta_stream, cfg.pin);
        ++trace.meta_updates;
        break;
      }
      case Algorithm::CommandOnly: {
        record.t = t;
        record.command = (*commands)(t);
        if (!record.command.complete()) {
          throw std::invalid_argument("command source returned a partial action");
        }
        record.executed = record.command;
        env.execute(t, record.executed);
        const SetFunction f = bandit_view(env);
        FeedbackGate gate(record.executed);
        record.total_value = gate.evaluate(f, t, record.executed);
        record.query_log = gate.query_log();
        break;
      }
      case Algorithm::SG: {
        record.t = t;
        const SetFunction plan = plan_view(env);
        record.executed = sequential_greedy(plan, t, space, ordering);
        env.execute(t, record.executed);
        const SetFunction f = bandit_view(env);
        FeedbackGate gate(record.executed);
        record.total_value = gate.evaluate(f, t, record.executed);
        record.query_log = gate.query_log();
        break;
      }
    }

    trace.gated_evaluations += static_cast<long>(record.query_log.size());
    if (cfg.record_value_tables) {
      std::vector<double> table(complete_count(space));
      for_each_complete(space, [&](const JointAction& a) {
        table[complete_index(a, space)] = env.evaluate(t, a);
      });
      trace.value_tables.push_back(std::move(table));
    }
    record.step_metric = env.step_metric();
    env.advance(t);
    trace.steps.push_back(std::move(record));
  }
  return trace;
}

}  // namespace bandit_coord
