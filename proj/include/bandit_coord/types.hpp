#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bandit_coord {

using AgentId = int;

struct ActionId {
  AgentId agent = 0;
  int index = 0;
  friend bool operator==(const ActionId&, const ActionId&) = default;
};

// Per-agent action-set sizes |V_i|, indexed by agent.
using ActionSpace = std::vector<int>;

enum class Strategy { ExtComm = 0, BSG = 1 };
const char* to_string(Strategy s);

// Contract breach observed at runtime (value outside declared bounds, reward
// outside [0,1], corrupted learner state).
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A coordinator queried the objective outside the executed set.
struct FeedbackViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Exhaustive enumeration refused because the space exceeds the guard budget.
struct EnumerationLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Partial assignment of at most one action per agent. This is the "set"
// the objectives are defined over: the ground set is partitioned per agent,
// so containing two actions of the same agent is impossible by construction.
class JointAction {
 public:
  static constexpr int kUnassigned = -1;

  JointAction() = default;
  explicit JointAction(int num_agents) : slots_(num_agents, kUnassigned) {}
  static JointAction complete_from(const std::vector<int>& actions);

  int num_agents() const { return static_cast<int>(slots_.size()); }
  bool assigned(AgentId agent) const;
  int action(AgentId agent) const;
  void assign(AgentId agent, int action_index);
  JointAction with(AgentId agent, int action_index) const;
  JointAction with(ActionId a) const { return with(a.agent, a.index); }

  int assigned_count() const;
  bool complete() const { return assigned_count() == num_agents(); }
  bool empty() const { return assigned_count() == 0; }
  bool subset_of(const JointAction& other) const;

  const std::vector<int>& slots() const { return slots_; }
  std::string describe() const;

  friend bool operator==(const JointAction&, const JointAction&) = default;

 private:
  std::vector<int> slots_;
};

// Enumeration sizes (saturate at uint64 max on overflow).
uint64_t complete_count(const ActionSpace& space);      // prod k_i
uint64_t partial_count(const ActionSpace& space);       // prod (k_i + 1)
uint64_t subset_pair_count(const ActionSpace& space);   // prod (2 k_i + 1)

// Mixed-radix index of a complete joint action; agent 0 is the most
// significant digit, so ascending index order is lexicographic order.
uint64_t complete_index(const JointAction& a, const ActionSpace& space);
uint64_t partial_index(const JointAction& a, const ActionSpace& space);

// Visits every complete joint action in lexicographic order.
template <class F>
void for_each_complete(const ActionSpace& space, F&& fn) {
  const int n = static_cast<int>(space.size());
  for (int i = 0; i < n; ++i) {
    if (space[i] <= 0) return;  // empty action set: no complete action exists
  }
  std::vector<int> digits(n, 0);
  while (true) {
    JointAction current(n);
    for (int i = 0; i < n; ++i) current.assign(i, digits[i]);
    fn(current);
    int pos = n - 1;
    while (pos >= 0) {
      if (++digits[pos] < space[pos]) break;
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

// Visits every partial joint action (slot value -1 meaning unassigned).
template <class F>
void for_each_partial(const ActionSpace& space, F&& fn) {
  const int n = static_cast<int>(space.size());
  std::vector<int> digits(n, -1);
  while (true) {
    JointAction current(n);
    for (int i = 0; i < n; ++i) {
      if (digits[i] >= 0) current.assign(i, digits[i]);
    }
    fn(current);
    int pos = n - 1;
    while (pos >= 0) {
      if (++digits[pos] < space[pos]) break;
      digits[pos] = -1;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace bandit_coord
