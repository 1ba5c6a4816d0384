#include <doctest.h>

#include <cmath>

#include "bandit_coord/coordination.hpp"
#include "bandit_coord/oracle.hpp"
#include "bandit_coord/synthetic.hpp"

using namespace bandit_coord;

namespace {

// Single-agent objective with per-action values (monotone and normalized).
SetFunction single_agent_values(std::vector<double> values, int horizon) {
  SetFunction f;
  f.horizon = horizon;
  f.per_step_upper_bound = 1.0;
  f.evaluate = [values = std::move(values)](int, const JointAction& a) {
    return a.assigned(0) ? values[a.action(0)] : 0.0;
  };
  return f;
}

CommandSource constant_command(const std::vector<int>& actions) {
  return [actions](int) { return JointAction::complete_from(actions); };
}

SetFunction normalized_coverage(const CoverageInstance& inst, int horizon) {
  const double r_max = std::max(inst.max_value(), 1.0);
  return normalize(
      [inst](int, const JointAction& a) { return inst.value(a); }, r_max,
      horizon, static_cast<int>(inst.space.size()));
}

}  // namespace

TEST_CASE("sequential greedy") {
  SUBCASE("one agent picks the argmax") {
    const SetFunction f = single_agent_values({0.2, 0.9, 0.4}, 1);
    const JointAction a = sequential_greedy(f, 1, ActionSpace{3});
    CHECK(a.action(0) == 1);
  }
  SUBCASE("ties break toward the lowest action index") {
    const SetFunction f = single_agent_values({0.5, 0.9, 0.9}, 1);
    CHECK(sequential_greedy(f, 1, ActionSpace{3}).action(0) == 1);
  }
  SUBCASE("modular objectives are solved exactly") {
    RngStream rng(31, 0);
    for (int k = 0; k < 20; ++k) {
      CoverageInstance inst = random_modular(rng);
      const SetFunction f = inst.as_set_function();
      const JointAction greedy = sequential_greedy(f, 1, inst.space);
      const HindsightSolution opt = hindsight_optimal(f, 1, inst.space);
      CHECK(f.evaluate(1, greedy) == opt.per_step_value[0]);
    }
  }
  SUBCASE("half of OPT on random coverage instances") {
    RngStream rng(33, 0);
    for (int k = 0; k < 200; ++k) {
      CoverageInstance inst = random_coverage(rng);
      const SetFunction f = inst.as_set_function();
      const JointAction greedy = sequential_greedy(f, 1, inst.space);
      const HindsightSolution opt = hindsight_optimal(f, 1, inst.space);
      CHECK(f.evaluate(1, greedy) >= 0.5 * opt.per_step_value[0]);
    }
  }
  SUBCASE("empty action set is a parameter error") {
    const SetFunction f = single_agent_values({1.0}, 1);
    CHECK_THROWS_AS(sequential_greedy(f, 1, ActionSpace{0}),
                    std::invalid_argument);
  }
}

TEST_CASE("bsg steps") {
  SUBCASE("constant zero objective yields zero rewards") {
    SetFunction f;
    f.horizon = 20;
    f.evaluate = [](int, const JointAction&) { return 0.0; };
    StaticEnvironment env(f, ActionSpace{3, 3});
    CoordinatorConfig cfg;
    cfg.horizon = 20;
    cfg.seed = 5;
    const EpisodeTrace trace = run_episode(Algorithm::BSG, env, cfg);
    for (const StepRecord& s : trace.steps) {
      CHECK(s.total_value == 0.0);
      for (double r : s.per_agent_reward) CHECK(r == 0.0);
    }
  }
  SUBCASE("a single agent concentrates on the better of two actions") {
    int wins = 0;
    for (int seed = 0; seed < 50; ++seed) {
      const SetFunction f = single_agent_values({1.0, 0.0}, 2000);
      StaticEnvironment env(f, ActionSpace{2});
      CoordinatorConfig cfg;
      cfg.horizon = 2000;
      cfg.seed = static_cast<uint64_t>(seed);
      const EpisodeTrace trace = run_episode(Algorithm::BSG, env, cfg);
      // Distribution snapshot at the final step (known argmax is action 0).
      if (trace.steps.back().agent_distributions[0][0] > 0.9) ++wins;
    }
    CHECK(wins >= 45);
  }
  SUBCASE("per-agent rewards telescope to the executed value") {
    RngStream rng(41, 0);
    for (int k = 0; k < 5; ++k) {
      CoverageInstance inst = random_coverage(rng);
      StaticEnvironment env(normalized_coverage(inst, 40), inst.space);
      CoordinatorConfig cfg;
      cfg.horizon = 40;
      cfg.seed = 900 + k;
      const EpisodeTrace trace = run_episode(Algorithm::BSG, env, cfg);
      for (const StepRecord& s : trace.steps) {
        double sum = 0.0;
        for (double r : s.per_agent_reward) sum += r;
        CHECK(std::abs(sum - s.total_value) <= 1e-9);
      }
    }
  }
}

TEST_CASE("metabsg steps") {
  const SetFunction f = single_agent_values(
      {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 1.0}, 2000);

  SUBCASE("pinned to BSG matches a plain BSG episode exactly") {
    StaticEnvironment env1(f, ActionSpace{8});
    StaticEnvironment env2(f, ActionSpace{8});
    CoordinatorConfig cfg;
    cfg.horizon = 500;
    cfg.seed = 123;
    const EpisodeTrace bsg = run_episode(Algorithm::BSG, env1, cfg);
    cfg.pin = MetaPin::kBsg;
    const CommandSource cmd = constant_command({0});
    const EpisodeTrace pinned = run_episode(Algorithm::MetaBSG, env2, cfg, &cmd);
    REQUIRE(bsg.steps.size() == pinned.steps.size());
    for (std::size_t i = 0; i < bsg.steps.size(); ++i) {
      CHECK(bsg.steps[i].executed == pinned.steps[i].executed);
      CHECK(bsg.steps[i].total_value == pinned.steps[i].total_value);
    }
    CHECK(bsg.total_value() == pinned.total_value());
  }
  SUBCASE("pinned to the command reproduces the command stream") {
    StaticEnvironment env(f, ActionSpace{8});
    CoordinatorConfig cfg;
    cfg.horizon = 100;
    cfg.seed = 9;
    cfg.pin = MetaPin::kExtComm;
    const CommandSource cmd = constant_command({3});
    const EpisodeTrace trace = run_episode(Algorithm::MetaBSG, env, cfg, &cmd);
    for (const StepRecord& s : trace.steps) {
      CHECK(s.executed == JointAction::complete_from({3}));
      CHECK(*s.strategy == Strategy::ExtComm);
    }
  }
  SUBCASE("an always-optimal command wins the meta distribution") {
    int wins = 0;
    for (int seed = 0; seed < 50; ++seed) {
      StaticEnvironment env(f, ActionSpace{8});
      CoordinatorConfig cfg;
      cfg.horizon = 2000;
      cfg.seed = static_cast<uint64_t>(seed);
      const CommandSource cmd = constant_command({7});  // the argmax action
      const EpisodeTrace trace = run_episode(Algorithm::MetaBSG, env, cfg, &cmd);
      const auto q = *trace.steps.back().meta_distribution;
      if (q[0] > 0.9) ++wins;  // mass on ExtComm
    }
    CHECK(wins >= 45);
  }
  SUBCASE("strategy draw frequency is consistent with recorded q") {
    SetFunction flat;
    flat.horizon = 2000;
    flat.evaluate = [](int, const JointAction& a) {
      return a.assigned_count() > 0 ? 0.5 : 0.0;
    };
    StaticEnvironment env(flat, ActionSpace{2});
    CoordinatorConfig cfg;
    cfg.horizon = 2000;
    cfg.seed = 4242;
    const CommandSource cmd = constant_command({0});
    const EpisodeTrace trace = run_episode(Algorithm::MetaBSG, env, cfg, &cmd);
    double freq = 0.0, expected = 0.0, variance = 0.0;
    for (const StepRecord& s : trace.steps) {
      const double q_bsg = (*s.meta_distribution)[1];
      freq += (*s.strategy == Strategy::BSG) ? 1.0 : 0.0;
      expected += q_bsg;
      variance += q_bsg * (1.0 - q_bsg);
    }
    CHECK(std::abs(freq - expected) <= 3.0 * std::sqrt(variance));
  }
  SUBCASE("a partial command is rejected") {
    StaticEnvironment env(f, ActionSpace{8});
    CoordinatorConfig cfg;
    cfg.horizon = 10;
    const CommandSource bad = [](int) { return JointAction(1); };
    CHECK_THROWS_AS(run_episode(Algorithm::MetaBSG, env, cfg, &bad),
                    std::invalid_argument);
  }
}

TEST_CASE("episode driver") {
  RngStream rng(55, 0);
  CoverageInstance inst = random_coverage(rng, 3, 4, 10);
  while (inst.space.size() != 3) inst = random_coverage(rng, 3, 4, 10);

  SUBCASE("zero horizon produces an empty trace") {
    StaticEnvironment env(normalized_coverage(inst, 10), inst.space);
    CoordinatorConfig cfg;
    cfg.horizon = 0;
    const EpisodeTrace trace = run_episode(Algorithm::BSG, env, cfg);
    CHECK(trace.steps.empty());
    CHECK(trace.total_value() == 0.0);
  }
  SUBCASE("bsg episodes make exactly one gated evaluation per agent per step") {
    StaticEnvironment env(normalized_coverage(inst, 100), inst.space);
    CoordinatorConfig cfg;
    cfg.horizon = 100;
    cfg.seed = 3;
    const EpisodeTrace trace = run_episode(Algorithm::BSG, env, cfg);
    CHECK(trace.gated_evaluations == 300);
    for (const StepRecord& s : trace.steps) {
      REQUIRE(s.query_log.size() == 3);
      // The log is exactly the prefix chain of the executed actions.
      JointAction prefix(3);
      for (std::size_t i = 0; i < s.query_log.size(); ++i) {
        prefix.assign(static_cast<int>(i), s.executed.action(static_cast<int>(i)));
        CHECK(s.query_log[i] == prefix);
        CHECK(s.query_log[i].subset_of(s.executed));
      }
    }
  }
  SUBCASE("identical seeds give bit-identical traces") {
    auto run = [&](uint64_t seed) {
      StaticEnvironment env(normalized_coverage(inst, 60), inst.space);
      CoordinatorConfig cfg;
      cfg.horizon = 60;
      cfg.seed = seed;
      return run_episode(Algorithm::BSG, env, cfg);
    };
    const EpisodeTrace a = run(12), b = run(12), c = run(13);
    REQUIRE(a.steps.size() == b.steps.size());
    bool differs_from_c = false;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
      CHECK(a.steps[i].executed == b.steps[i].executed);
      CHECK(a.steps[i].total_value == b.steps[i].total_value);
      CHECK(a.steps[i].per_agent_reward == b.steps[i].per_agent_reward);
      if (!(a.steps[i].executed == c.steps[i].executed)) differs_from_c = true;
    }
    CHECK(differs_from_c);
  }
  SUBCASE("missing command source is a parameter error") {
    StaticEnvironment env(normalized_coverage(inst, 10), inst.space);
    CoordinatorConfig cfg;
    cfg.horizon = 10;
    CHECK_THROWS_AS(run_episode(Algorithm::MetaBSG, env, cfg, nullptr),
                    std::invalid_argument);
  }
  SUBCASE("invalid orderings are rejected") {
    StaticEnvironment env(normalized_coverage(inst, 10), inst.space);
    CoordinatorConfig cfg;
    cfg.horizon = 10;
    cfg.ordering = {0, 0, 1};
    CHECK_THROWS_AS(run_episode(Algorithm::BSG, env, cfg),
                    std::invalid_argument);
  }
  SUBCASE("command-only episodes evaluate once per step") {
    StaticEnvironment env(normalized_coverage(inst, 50), inst.space);
    CoordinatorConfig cfg;
    cfg.horizon = 50;
    const CommandSource cmd = constant_command({0, 0, 0});
    const EpisodeTrace trace = run_episode(Algorithm::CommandOnly, env, cfg, &cmd);
    CHECK(trace.gated_evaluations == 50);
    for (const StepRecord& s : trace.steps) {
      CHECK(s.executed == JointAction::complete_from({0, 0, 0}));
    }
  }
}
