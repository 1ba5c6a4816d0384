#pragma once

#include <array>
#include <vector>

#include "bandit_coord/types.hpp"

namespace bandit_coord {

enum class MetaUpdateMode {
  kPaper,     // exponent normalized by ||r_tilde||_1 (sum of absolute values)
  kStandard,  // plain EXP3-IX exponent
};
const char* to_string(MetaUpdateMode m);

// Two-armed EXP3-IX over {ExtComm, BSG}. Plain value type: copy freely,
// single writer. Weight index 0 = ExtComm, 1 = BSG.
struct MetaLearner {
  double eta = 0.0;
  double gamma = 0.0;
  std::array<double, 2> z{1.0, 1.0};
  int t = 1;
  int horizon = 0;
  MetaUpdateMode mode = MetaUpdateMode::kPaper;

  // eta = sqrt(ln 2 / T), gamma = eta / 2, unit weights.
  static MetaLearner make(int horizon,
                          MetaUpdateMode mode = MetaUpdateMode::kPaper);

  // q = z / ||z||_1.
  std::array<double, 2> distribution() const;

  // Implicit-exploration update. For both arms s:
  //   r_tilde_s = 1 - [1(chosen == s) / (q_s + gamma)] * (1 - reward).
  // The unchosen arm always receives the optimistic estimate 1; the chosen
  // arm receives at most 1. Weights are then scaled by
  //   exp(eta * r_tilde_s / ||r_tilde||_1)   (paper mode)
  //   exp(eta * r_tilde_s)                   (standard mode)
  // and renormalized to mean 1, which leaves the distribution unchanged.
  void update(Strategy chosen, double reward);
};

// Per-agent action learner: EXP3-IX reward estimates plus a fixed-share
// mixing step (alpha = 1/T) so the arm distribution can track optima that
// shift over the horizon. Stand-in for the cited EXP3*-SIX learner, whose
// internals are not printed here.
struct AgentLearner {
  int arms = 0;
  double eta = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  std::vector<double> w;
  int t = 1;
  int horizon = 0;

  // eta = sqrt(2 ln(K T) / (K T)), gamma = eta / 2, alpha = 1 / T.
  static AgentLearner make(int arms, int horizon);

  // p = w / ||w||_1. After any update, every component is >= alpha / K.
  std::vector<double> distribution() const;

  // IX estimate, exponential weight step, then fixed-share mixing:
  //   w <- (1 - alpha) w + (alpha / K) ||w||_1 * 1.
  // Weights are renormalized to mean 1 to prevent drift over long horizons.
  void update(int chosen_arm, double reward);
};

}  // namespace bandit_coord
