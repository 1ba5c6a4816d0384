#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bandit_coord {

// Derives an independent stream seed from a root seed and a stream id
// (splitmix64 finalizer). Used so that toggling one random consumer
// (meta draw, an agent's draw, sensor noise) never perturbs the others.
uint64_t mix_seed(uint64_t root_seed, uint64_t stream_id);

// Stream ids used by the episode drivers.
inline constexpr uint64_t kMetaStream = 0;
inline constexpr uint64_t kAgentStreamBase = 1;  // agent i -> kAgentStreamBase + i
inline constexpr uint64_t kEnvNoiseStream = 1'000'000;

// Deterministic random stream. Draw primitives are hand-rolled on top of
// mt19937_64 so sequences are identical across standard libraries.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(uint64_t root_seed, uint64_t stream_id);

  uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal(double mean, double stddev);
  // Draws an index from a probability vector (sum ~ 1).
  int categorical(const std::vector<double>& probs);
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bandit_coord
