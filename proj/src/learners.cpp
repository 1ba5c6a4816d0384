#include "bandit_coord/learners.hpp"

#include <cassert>
#include <cmath>

namespace bandit_coord {

namespace {

void check_reward(double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::invalid_argument("learner update: reward outside [0,1]");
  }
}

void check_finite_positive(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw ContractError("learner state corrupted: non-positive or non-finite weight");
  }
}

}  // namespace

const char* to_string(MetaUpdateMode m) {
  return m == MetaUpdateMode::kPaper ? "paper" : "standard";
}

MetaLearner MetaLearner::make(int horizon, MetaUpdateMode mode) {
  if (horizon < 1) {
    throw std::invalid_argument("MetaLearner: horizon must be >= 1");
  }
  MetaLearner m;
  m.horizon = horizon;
  m.eta = std::sqrt(std::log(2.0) / static_cast<double>(horizon));
  m.gamma = m.eta / 2.0;
  m.z = {1.0, 1.0};
  m.t = 1;
  m.mode = mode;
  return m;
}

std::array<double, 2> MetaLearner::distribution() const {
  check_finite_positive(z[0]);
  check_finite_positive(z[1]);
  const double sum = z[0] + z[1];
  return {z[0] / sum, z[1] / sum};
}

void MetaLearner::update(Strategy chosen, double reward) {
  check_reward(reward);
  const auto q = distribution();
  const int c = static_cast<int>(chosen);

  std::array<double, 2> r_tilde;
  for (int s = 0; s < 2; ++s) {
    const double indicator = (s == c) ? 1.0 : 0.0;
    r_tilde[s] = 1.0 - indicator / (q[s] + gamma) * (1.0 - reward);
  }

  double scale = 1.0;
  if (mode == MetaUpdateMode::kPaper) {
    // ||r_tilde||_1 over a signed vector: sum of absolute values. With two
    // arms the unchosen estimate is exactly 1, so the norm is >= 1.
    const double norm = std::abs(r_tilde[0]) + std::abs(r_tilde[1]);
    assert(norm > 0.0);
    if (norm > 0.0) scale = 1.0 / norm;
  }
  for (int s = 0; s < 2; ++s) {
    z[s] *= std::exp(eta * r_tilde[s] * scale);
  }
  // Rescale to mean 1: pure scaling, distribution-invariant.
  const double mean = (z[0] + z[1]) / 2.0;
  z[0] /= mean;
  z[1] /= mean;
  check_finite_positive(z[0]);
  check_finite_positive(z[1]);
  ++t;
}

AgentLearner AgentLearner::make(int arms, int horizon) {
  if (arms < 1) throw std::invalid_argument("AgentLearner: arms must be >= 1");
  if (horizon < 1) {
    throw std::invalid_argument("AgentLearner: horizon must be >= 1");
  }
  AgentLearner a;
  a.arms = arms;
  a.horizon = horizon;
  const double kt = static_cast<double>(arms) * static_cast<double>(horizon);
  a.eta = std::sqrt(2.0 * std::log(kt) / kt);
  a.gamma = a.eta / 2.0;
  a.alpha = 1.0 / static_cast<double>(horizon);
  a.w.assign(arms, 1.0);
  a.t = 1;
  return a;
}

std::vector<double> AgentLearner::distribution() const {
  double sum = 0.0;
  for (double wi : w) {
    check_finite_positive(wi);
    sum += wi;
  }
  std::vector<double> p(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) p[i] = w[i] / sum;
  return p;
}

void AgentLearner::update(int chosen_arm, double reward) {
  check_reward(reward);
  if (chosen_arm < 0 || chosen_arm >= arms) {
    throw std::invalid_argument("AgentLearner: chosen arm out of range");
  }
  const auto p = distribution();

  double sum = 0.0;
  for (int a = 0; a < arms; ++a) {
    const double indicator = (a == chosen_arm) ? 1.0 : 0.0;
    const double r_tilde = 1.0 - indicator / (p[a] + gamma) * (1.0 - reward);
    w[a] *= std::exp(eta * r_tilde);
    sum += w[a];
  }
  // Fixed-share mixing toward uniform: keeps every arm alive so the learner
  // can track optima that shift over the horizon.
  const double share = alpha * sum / static_cast<double>(arms);
  double new_sum = 0.0;
  for (int a = 0; a < arms; ++a) {
    w[a] = (1.0 - alpha) * w[a] + share;
    new_sum += w[a];
  }
  // Rescale to mean 1 to prevent under/overflow over long horizons.
  const double mean = new_sum / static_cast<double>(arms);
  for (int a = 0; a < arms; ++a) {
    w[a] /= mean;
    check_finite_positive(w[a]);
  }
  ++t;
}

}  // namespace bandit_coord
