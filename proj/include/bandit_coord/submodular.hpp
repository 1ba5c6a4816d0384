#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bandit_coord/types.hpp"

namespace bandit_coord {

// Time-indexed set function over partial joint actions. `evaluate(t, A)` must
// be pure given (t, A); safe for concurrent read-only use.
struct SetFunction {
  int horizon = 0;
  double per_step_upper_bound = 1.0;  // R_max: max of f over any step
  std::function<double(int t, const JointAction& a)> evaluate;
};

// f_t(a | base) = f_t(base + a) - f_t(base).
double marginal_gain(const SetFunction& f, int t, ActionId a,
                     const JointAction& base);

// Shifts and scales a raw objective into [0,1] with g(t, empty) = 0:
//   g(t, A) = (raw(t, A) - raw(t, empty)) / r_max.
// The argmax over joint actions is unchanged. Evaluation throws
// ContractError if a raw value falls outside [raw(t, empty),
// raw(t, empty) + r_max].
SetFunction normalize(std::function<double(int, const JointAction&)> raw,
                      double r_max, int horizon, int num_agents);

// Bandit-feedback enforcement: per step, only subsets of the executed joint
// action may be evaluated. Single-writer per episode step.
class FeedbackGate {
 public:
  explicit FeedbackGate(JointAction executed);

  // Returns f_t(a) iff a is a subset of the executed set and logs the query;
  // otherwise throws FeedbackViolation without logging.
  double evaluate(const SetFunction& f, int t, const JointAction& a);

  const JointAction& executed() const { return executed_; }
  const std::vector<JointAction>& query_log() const { return query_log_; }

 private:
  JointAction executed_;
  std::vector<JointAction> query_log_;
};

// Exhaustive check of: normalization f(empty) = 0, monotonicity
// f(A) <= f(B) for A subset of B, and diminishing returns
// f(s|A) >= f(s|B) for A subset of B, s unassigned in B.
// Never samples: refuses (EnumerationLimit) when prod(2 k_i + 1) exceeds
// `pair_budget`.
struct Definition1Report {
  enum class Property { kNormalization, kMonotonicity, kSubmodularity };
  struct Violation {
    Property property;
    JointAction smaller;             // A
    JointAction larger;              // B
    std::optional<ActionId> element; // s, for submodularity
    double lhs = 0.0;
    double rhs = 0.0;
    std::string describe() const;
  };
  std::optional<Violation> violation;  // nullopt => pass
  uint64_t checked_pairs = 0;
  bool passed() const { return !violation.has_value(); }
};

Definition1Report verify_definition1(const SetFunction& f, int t,
                                     const ActionSpace& space,
                                     double tol = 1e-9,
                                     uint64_t pair_budget = 1'000'000);

}  // namespace bandit_coord
