#pragma once

#include <cstdint>
#include <vector>

#include "bandit_coord/rng.hpp"
#include "bandit_coord/submodular.hpp"
#include "bandit_coord/types.hpp"

namespace bandit_coord {

// Weighted coverage objective: each action covers a subset of a small
// universe (bitmask), f(A) = total weight of the union. Monotone submodular
// and normalized by construction. Weights are integer-valued doubles so
// sums are exact and greedy-vs-optimal comparisons need no tolerance.
struct CoverageInstance {
  ActionSpace space;
  std::vector<double> weights;                 // per universe element
  std::vector<std::vector<uint64_t>> covers;   // [agent][action] bitmask

  double value(const JointAction& a) const;
  double max_value() const;                    // total universe weight
  SetFunction as_set_function(int horizon = 1) const;
};

CoverageInstance random_coverage(RngStream& rng, int max_agents = 3,
                                 int max_actions = 5, int universe = 12,
                                 int max_cover_per_action = 5);

// Coverage instance with per-agent disjoint universes: the objective is
// additive across agents (modular), so the per-agent argmax equals OPT.
CoverageInstance random_modular(RngStream& rng, int max_agents = 3,
                                int max_actions = 5,
                                int elements_per_agent = 4);

// f(A) = |A|^2: violates diminishing returns on two or more agents.
// Used to prove the Definition-1 verifier rejects supermodular functions.
SetFunction supermodular_square(int num_agents, int actions_per_agent = 1);

}  // namespace bandit_coord
