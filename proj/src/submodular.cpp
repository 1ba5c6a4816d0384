#include "bandit_coord/submodular.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace bandit_coord {

double marginal_gain(const SetFunction& f, int t, ActionId a,
                     const JointAction& base) {
  if (base.assigned(a.agent)) {
    throw std::invalid_argument(
        "marginal_gain: agent already assigned in the base set");
  }
  return f.evaluate(t, base.with(a)) - f.evaluate(t, base);
}

SetFunction normalize(std::function<double(int, const JointAction&)> raw,
                      double r_max, int horizon, int num_agents) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument("normalize: r_max must be positive and finite");
  }
  SetFunction g;
  g.horizon = horizon;
  g.per_step_upper_bound = 1.0;
  g.evaluate = [raw = std::move(raw), r_max,
                num_agents](int t, const JointAction& a) -> double {
    const JointAction empty(num_agents);
    const double zero = raw(t, empty);
    const double value = raw(t, a);
    const double slack = 1e-9 * r_max;
    if (!(value >= zero - slack) || !(value <= zero + r_max + slack)) {
      std::ostringstream os;
      os << "normalize: raw value " << value << " outside [" << zero << ", "
         << zero + r_max << "] at t=" << t << " A=" << a.describe();
      throw ContractError(os.str());
    }
    double out = (value - zero) / r_max;
    if (out < 0.0) out = 0.0;
    if (out > 1.0) out = 1.0;
    return out;
  };
  return g;
}

FeedbackGate::FeedbackGate(JointAction executed)
    : executed_(std::move(executed)) {}

double FeedbackGate::evaluate(const SetFunction& f, int t,
                              const JointAction& a) {
  if (!a.subset_of(executed_)) {
    throw FeedbackViolation("bandit-feedback violation: query " +
                            a.describe() + " is not a subset of executed " +
                            executed_.describe());
  }
  query_log_.push_back(a);
  return f.evaluate(t, a);
}

std::string Definition1Report::Violation::describe() const {
  std::ostringstream os;
  switch (property) {
    case Property::kNormalization:
      os << "normalization: f(empty) = " << lhs << " != 0";
      break;
    case Property::kMonotonicity:
      os << "monotonicity: f(" << smaller.describe() << ") = " << lhs
         << " > f(" << larger.describe() << ") = " << rhs;
      break;
    case Property::kSubmodularity:
      os << "submodularity: gain of (agent " << element->agent << ", action "
         << element->index << ") given " << smaller.describe() << " = " << lhs
         << " < gain given " << larger.describe() << " = " << rhs;
      break;
  }
  return os.str();
}

Definition1Report verify_definition1(const SetFunction& f, int t,
                                     const ActionSpace& space, double tol,
                                     uint64_t pair_budget) {
  const uint64_t pairs = subset_pair_count(space);
  if (pairs > pair_budget) {
    std::ostringstream os;
    os << "verify_definition1: refusing to sample; exhaustive check needs "
       << pairs << " subset pairs, budget is " << pair_budget;
    throw EnumerationLimit(os.str());
  }

  Definition1Report report;
  const int n = static_cast<int>(space.size());

  // Memoize every partial value once.
  std::vector<double> table(partial_count(space));
  for_each_partial(space, [&](const JointAction& a) {
    table[partial_index(a, space)] = f.evaluate(t, a);
  });
  const auto value = [&](const JointAction& a) {
    return table[partial_index(a, space)];
  };

  const JointAction empty(n);
  const double f_empty = value(empty);
  if (std::abs(f_empty) > tol) {
    report.violation = {Definition1Report::Property::kNormalization, empty,
                        empty, std::nullopt, f_empty, 0.0};
    return report;
  }

  bool done = false;
  for_each_partial(space, [&](const JointAction& larger) {
    if (done) return;
    // Enumerate subsets of `larger` by keeping or dropping each assignment.
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (larger.slots()[i] != JointAction::kUnassigned) members.push_back(i);
    }
    const int m = static_cast<int>(members.size());
    for (uint64_t mask = 0; mask < (uint64_t{1} << m) && !done; ++mask) {
      JointAction smaller(n);
      for (int b = 0; b < m; ++b) {
        if (mask & (uint64_t{1} << b)) {
          smaller.assign(members[b], larger.slots()[members[b]]);
        }
      }
      ++report.checked_pairs;
      const double fa = value(smaller);
      const double fb = value(larger);
      if (fa > fb + tol) {
        report.violation = {Definition1Report::Property::kMonotonicity,
                            smaller, larger, std::nullopt, fa, fb};
        done = true;
        break;
      }
      for (int agent = 0; agent < n && !done; ++agent) {
        if (larger.slots()[agent] != JointAction::kUnassigned) continue;
        for (int v = 0; v < space[agent]; ++v) {
          const double gain_small = value(smaller.with(agent, v)) - fa;
          const double gain_large = value(larger.with(agent, v)) - fb;
          if (gain_small < gain_large - tol) {
            report.violation = {Definition1Report::Property::kSubmodularity,
                                smaller, larger, ActionId{agent, v},
                                gain_small, gain_large};
            done = true;
            break;
          }
        }
      }
    }
  });
  return report;
}

}  // namespace bandit_coord
