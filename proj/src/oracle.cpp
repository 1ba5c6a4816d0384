#include "bandit_coord/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bandit_coord {

HindsightSolution hindsight_optimal(const SetFunction& f, int horizon,
                                    const ActionSpace& space, uint64_t budget,
                                    std::size_t tie_cap) {
  const uint64_t count = complete_count(space);
  if (count == 0) {
    throw std::invalid_argument("hindsight_optimal: empty action space");
  }
  if (count > budget) {
    std::ostringstream os;
    os << "hindsight_optimal: product space has " << count
       << " joint actions per step; enumeration budget is " << budget;
    throw EnumerationLimit(os.str());
  }

  HindsightSolution sol;
  sol.per_step_optimal.reserve(horizon);
  sol.per_step_value.reserve(horizon);
  sol.tied_optima.resize(horizon);

  for (int t = 1; t <= horizon; ++t) {
    JointAction best;
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<JointAction>& ties = sol.tied_optima[t - 1];
    // Lexicographic enumeration: the first strict maximum is the
    // lexicographically smallest maximizer.
    for_each_complete(space, [&](const JointAction& a) {
      const double v = f.evaluate(t, a);
      if (v > best_value) {
        best_value = v;
        best = a;
        ties.clear();
        ties.push_back(a);
      } else if (v == best_value && ties.size() <= tie_cap) {
        ties.push_back(a);
      }
    });
    if (ties.size() > tie_cap) {
      ties.clear();
      ties.push_back(best);
      sol.ties_complete = false;
    }
    sol.per_step_optimal.push_back(best);
    sol.per_step_value.push_back(best_value);
    sol.total_value += best_value;
  }
  return sol;
}

namespace {

int shift_count(const JointAction& a, const JointAction& b) {
  int shifts = 0;
  for (int i = 0; i < a.num_agents(); ++i) {
    shifts += (a.slots()[i] != b.slots()[i]);
  }
  return shifts;
}

}  // namespace

long delta_T(const HindsightSolution& solution) {
  if (solution.horizon() < 1) {
    throw std::invalid_argument("delta_T: solution must cover >= 1 step");
  }
  long total = 0;
  for (int t = 0; t + 1 < solution.horizon(); ++t) {
    total += shift_count(solution.per_step_optimal[t],
                         solution.per_step_optimal[t + 1]);
  }
  return total;
}

std::optional<long> delta_T_min_shift(const HindsightSolution& solution) {
  if (!solution.ties_complete) return std::nullopt;
  const int horizon = solution.horizon();
  if (horizon < 1) {
    throw std::invalid_argument("delta_T_min_shift: empty solution");
  }
  // DP over steps: cost of selecting each tied optimum given the cheapest
  // compatible predecessor.
  std::vector<long> prev(solution.tied_optima[0].size(), 0);
  for (int t = 1; t < horizon; ++t) {
    const auto& here = solution.tied_optima[t];
    const auto& before = solution.tied_optima[t - 1];
    std::vector<long> cur(here.size(), std::numeric_limits<long>::max());
    for (std::size_t k = 0; k < here.size(); ++k) {
      for (std::size_t j = 0; j < before.size(); ++j) {
        const long c = prev[j] + shift_count(before[j], here[k]);
        cur[k] = std::min(cur[k], c);
      }
    }
    prev = std::move(cur);
  }
  return *std::min_element(prev.begin(), prev.end());
}

double empirical_beta(const std::vector<double>& command_values,
                      const HindsightSolution& solution) {
  if (command_values.size() != solution.per_step_value.size()) {
    throw std::invalid_argument("empirical_beta: horizon mismatch");
  }
  if (!(solution.total_value > 0.0)) {
    throw ContractError("empirical_beta: undefined, optimal total is not positive");
  }
  double command_total = 0.0;
  for (double v : command_values) command_total += v;
  return std::clamp(command_total / solution.total_value, 0.0, 1.0);
}

double empirical_beta(const EpisodeTrace& command_trace,
                      const HindsightSolution& solution) {
  return empirical_beta(command_trace.step_values(), solution);
}

RegretReport bound_report(const EpisodeTrace& meta_trace,
                          const EpisodeTrace& bsg_trace,
                          const EpisodeTrace& command_trace,
                          const HindsightSolution& solution, double delta,
                          double bound_c) {
  const std::size_t horizon = solution.per_step_value.size();
  if (meta_trace.steps.size() != horizon ||
      bsg_trace.steps.size() != horizon ||
      command_trace.steps.size() != horizon) {
    throw std::invalid_argument("bound_report: traces and solution must share the horizon");
  }
  RegretReport r;
  r.opt_total = solution.total_value;
  r.meta_total = meta_trace.total_value();
  r.bsg_total = bsg_trace.total_value();
  r.command_total = command_trace.total_value();
  r.delta_t = delta_T(solution);
  r.delta_t_min_shift = delta_T_min_shift(solution);
  r.empirical_beta = empirical_beta(command_trace, solution);
  r.delta = delta;
  r.bound_c = bound_c;
  const double better = std::max(r.bsg_total, r.command_total);
  r.meta_slack = r.meta_total - better;
  r.sg_half_slack = r.bsg_total - 0.5 * r.opt_total;
  r.meta_within_bound =
      r.meta_total >= better - bound_c * std::sqrt(static_cast<double>(horizon));
  return r;
}

SetFunction tabulated_function(const EpisodeTrace& trace) {
  if (trace.value_tables.size() != trace.steps.size()) {
    throw std::invalid_argument(
        "tabulated_function: trace has no recorded value tables");
  }
  SetFunction f;
  f.horizon = static_cast<int>(trace.steps.size());
  f.per_step_upper_bound = 1.0;
  f.evaluate = [tables = trace.value_tables,
                space = trace.space](int t, const JointAction& a) -> double {
    if (t < 1 || t > static_cast<int>(tables.size())) {
      throw std::invalid_argument("tabulated_function: step out of range");
    }
    if (!a.complete()) {
      throw std::invalid_argument(
          "tabulated_function: defined for complete joint actions only");
    }
    return tables[t - 1][complete_index(a, space)];
  };
  return f;
}

}  // namespace bandit_coord
