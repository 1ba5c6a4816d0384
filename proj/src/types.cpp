#include "bandit_coord/types.hpp"

#include <limits>
#include <sstream>

namespace bandit_coord {

const char* to_string(Strategy s) {
  return s == Strategy::ExtComm ? "ExtComm" : "BSG";
}

JointAction JointAction::complete_from(const std::vector<int>& actions) {
  JointAction a(static_cast<int>(actions.size()));
  for (std::size_t i = 0; i < actions.size(); ++i) {
    a.assign(static_cast<int>(i), actions[i]);
  }
  return a;
}

bool JointAction::assigned(AgentId agent) const {
  if (agent < 0 || agent >= num_agents()) {
    throw std::invalid_argument("JointAction: agent out of range");
  }
  return slots_[agent] != kUnassigned;
}

int JointAction::action(AgentId agent) const {
  if (!assigned(agent)) {
    throw std::invalid_argument("JointAction: agent has no action assigned");
  }
  return slots_[agent];
}

void JointAction::assign(AgentId agent, int action_index) {
  if (agent < 0 || agent >= num_agents()) {
    throw std::invalid_argument("JointAction: agent out of range");
  }
  if (action_index < 0) {
    throw std::invalid_argument("JointAction: negative action index");
  }
  if (slots_[agent] != kUnassigned) {
    throw std::invalid_argument("JointAction: agent already assigned");
  }
  slots_[agent] = action_index;
}

JointAction JointAction::with(AgentId agent, int action_index) const {
  JointAction copy = *this;
  copy.assign(agent, action_index);
  return copy;
}

int JointAction::assigned_count() const {
  int n = 0;
  for (int s : slots_) n += (s != kUnassigned);
  return n;
}

bool JointAction::subset_of(const JointAction& other) const {
  if (num_agents() != other.num_agents()) return false;
  for (int i = 0; i < num_agents(); ++i) {
    if (slots_[i] != kUnassigned && slots_[i] != other.slots_[i]) return false;
  }
  return true;
}

std::string JointAction::describe() const {
  std::ostringstream os;
  os << "{";
  for (int i = 0; i < num_agents(); ++i) {
    if (i) os << ",";
    if (slots_[i] == kUnassigned) {
      os << "-";
    } else {
      os << slots_[i];
    }
  }
  os << "}";
  return os.str();
}

namespace {

uint64_t saturating_prod(const ActionSpace& space, uint64_t mul_offset,
                         uint64_t scale) {
  uint64_t prod = 1;
  for (int k : space) {
    if (k < 0) throw std::invalid_argument("ActionSpace: negative arm count");
    const uint64_t term = scale * static_cast<uint64_t>(k) + mul_offset;
    if (term != 0 &&
        prod > std::numeric_limits<uint64_t>::max() / term) {
      return std::numeric_limits<uint64_t>::max();
    }
    prod *= term;
  }
  return prod;
}

}  // namespace

uint64_t complete_count(const ActionSpace& space) {
  return saturating_prod(space, 0, 1);
}

uint64_t partial_count(const ActionSpace& space) {
  return saturating_prod(space, 1, 1);
}

uint64_t subset_pair_count(const ActionSpace& space) {
  return saturating_prod(space, 1, 2);
}

uint64_t complete_index(const JointAction& a, const ActionSpace& space) {
  if (a.num_agents() != static_cast<int>(space.size())) {
    throw std::invalid_argument("complete_index: agent count mismatch");
  }
  uint64_t idx = 0;
  for (int i = 0; i < a.num_agents(); ++i) {
    const int v = a.action(i);  // throws when not complete
    if (v >= space[i]) {
      throw std::invalid_argument("complete_index: action out of range");
    }
    idx = idx * static_cast<uint64_t>(space[i]) + static_cast<uint64_t>(v);
  }
  return idx;
}

uint64_t partial_index(const JointAction& a, const ActionSpace& space) {
  if (a.num_agents() != static_cast<int>(space.size())) {
    throw std::invalid_argument("partial_index: agent count mismatch");
  }
  uint64_t idx = 0;
  for (int i = 0; i < a.num_agents(); ++i) {
    const int v = a.slots()[i];  // -1 allowed
    if (v >= space[i]) {
      throw std::invalid_argument("partial_index: action out of range");
    }
    idx = idx * static_cast<uint64_t>(space[i] + 1) +
          static_cast<uint64_t>(v + 1);
  }
  return idx;
}

}  // namespace bandit_coord
