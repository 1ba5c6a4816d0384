#include "bandit_coord/synthetic.hpp"

#include <bit>

namespace bandit_coord {

double CoverageInstance::value(const JointAction& a) const {
  uint64_t covered = 0;
  for (int i = 0; i < a.num_agents(); ++i) {
    if (a.slots()[i] != JointAction::kUnassigned) {
      covered |= covers[i][a.slots()[i]];
    }
  }
  double total = 0.0;
  while (covered) {
    const int bit = std::countr_zero(covered);
    total += weights[bit];
    covered &= covered - 1;
  }
  return total;
}

double CoverageInstance::max_value() const {
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

SetFunction CoverageInstance::as_set_function(int horizon) const {
  SetFunction f;
  f.horizon = horizon;
  f.per_step_upper_bound = max_value();
  if (f.per_step_upper_bound <= 0.0) f.per_step_upper_bound = 1.0;
  f.evaluate = [inst = *this](int, const JointAction& a) {
    return inst.value(a);
  };
  return f;
}

CoverageInstance random_coverage(RngStream& rng, int max_agents,
                                 int max_actions, int universe,
                                 int max_cover_per_action) {
  CoverageInstance inst;
  const int agents = rng.uniform_int(1, max_agents);
  inst.space.resize(agents);
  inst.weights.resize(universe);
  for (int e = 0; e < universe; ++e) {
    inst.weights[e] = static_cast<double>(rng.uniform_int(1, 10));
  }
  inst.covers.resize(agents);
  for (int i = 0; i < agents; ++i) {
    inst.space[i] = rng.uniform_int(1, max_actions);
    inst.covers[i].resize(inst.space[i]);
    for (int v = 0; v < inst.space[i]; ++v) {
      uint64_t mask = 0;
      const int k = rng.uniform_int(0, max_cover_per_action);
      for (int c = 0; c < k; ++c) {
        mask |= uint64_t{1} << rng.uniform_int(0, universe - 1);
      }
      inst.covers[i][v] = mask;
    }
  }
  return inst;
}

CoverageInstance random_modular(RngStream& rng, int max_agents,
                                int max_actions, int elements_per_agent) {
  CoverageInstance inst;
  const int agents = rng.uniform_int(1, max_agents);
  inst.space.resize(agents);
  inst.weights.resize(agents * elements_per_agent);
  for (double& w : inst.weights) {
    w = static_cast<double>(rng.uniform_int(1, 10));
  }
  inst.covers.resize(agents);
  for (int i = 0; i < agents; ++i) {
    inst.space[i] = rng.uniform_int(1, max_actions);
    inst.covers[i].resize(inst.space[i]);
    for (int v = 0; v < inst.space[i]; ++v) {
      // One private element per action keeps the objective additive.
      const int e = i * elements_per_agent + rng.uniform_int(0, elements_per_agent - 1);
      inst.covers[i][v] = uint64_t{1} << e;
    }
  }
  return inst;
}

SetFunction supermodular_square(int num_agents, int actions_per_agent) {
  (void)actions_per_agent;
  SetFunction f;
  f.horizon = 1;
  f.per_step_upper_bound = static_cast<double>(num_agents * num_agents);
  f.evaluate = [](int, const JointAction& a) {
    const double k = static_cast<double>(a.assigned_count());
    return k * k;
  };
  return f;
}

}  // namespace bandit_coord
