#pragma once

#include <optional>
#include <vector>

#include "bandit_coord/coordination.hpp"
#include "bandit_coord/submodular.hpp"
#include "bandit_coord/types.hpp"

namespace bandit_coord {

// Per-step exact maximizers of a predefined objective sequence. The optimum
// decomposes over steps because actions do not couple across steps.
struct HindsightSolution {
  std::vector<JointAction> per_step_optimal;  // lexicographic tie-break
  std::vector<double> per_step_value;
  double total_value = 0.0;
  // All exactly-tied maximizers per step, collected while each step's tie
  // count stays within the cap; otherwise ties_complete is false and the
  // minimum-shift statistic is unavailable.
  std::vector<std::vector<JointAction>> tied_optima;
  bool ties_complete = true;

  int horizon() const { return static_cast<int>(per_step_optimal.size()); }
};

// Brute force over the full product space per step. Refuses (EnumerationLimit)
// when prod |V_i| exceeds `budget`, reporting the required budget.
HindsightSolution hindsight_optimal(const SetFunction& f, int horizon,
                                    const ActionSpace& space,
                                    uint64_t budget = 1'000'000,
                                    std::size_t tie_cap = 1024);

// Number of per-agent shifts in the hindsight-optimal sequence:
// sum over t < T, i of 1(a*_{i,t} != a*_{i,t+1}).
long delta_T(const HindsightSolution& solution);

// Minimum delta over all choices among tied optima (DP over steps).
// nullopt when the tie sets were truncated.
std::optional<long> delta_T_min_shift(const HindsightSolution& solution);

// sum_t command_value_t / sum_t opt_value_t, clamped into [0,1].
// Throws ContractError when the optimal total is not positive.
double empirical_beta(const std::vector<double>& command_values,
                      const HindsightSolution& solution);
double empirical_beta(const EpisodeTrace& command_trace,
                      const HindsightSolution& solution);

struct RegretReport {
  double opt_total = 0.0;
  double bsg_total = 0.0;
  double command_total = 0.0;
  double meta_total = 0.0;
  long delta_t = 0;
  std::optional<long> delta_t_min_shift;
  double empirical_beta = 0.0;
  double delta = 0.05;   // confidence parameter used when reporting slack
  double bound_c = 8.0;  // configurable constant of the sqrt(T) envelope
  // meta_total - max(bsg_total, command_total).
  double meta_slack = 0.0;
  // bsg_total - opt_total / 2.
  double sg_half_slack = 0.0;
  // meta_total >= max(bsg_total, command_total) - bound_c * sqrt(T).
  bool meta_within_bound = false;
};

// Assembles totals and bound slacks from the three traces and the hindsight
// solution. All inputs must share the horizon.
RegretReport bound_report(const EpisodeTrace& meta_trace,
                          const EpisodeTrace& bsg_trace,
                          const EpisodeTrace& command_trace,
                          const HindsightSolution& solution, double delta,
                          double bound_c = 8.0);

// SetFunction view over the value tables recorded in a trace: defined for
// complete joint actions of the trace's own realized objective sequence.
SetFunction tabulated_function(const EpisodeTrace& trace);

}  // namespace bandit_coord
