#include "bandit_coord/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace bandit_coord {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t mix_seed(uint64_t root_seed, uint64_t stream_id) {
  return splitmix64(splitmix64(root_seed) ^ splitmix64(~stream_id));
}

RngStream::RngStream(uint64_t root_seed, uint64_t stream_id)
    : gen_(mix_seed(root_seed, stream_id)) {}

uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform() {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::normal(double mean, double stddev) {
  // Box-Muller with spare caching; hand-rolled so sequences are identical
  // across standard libraries.
  double z;
  if (has_spare_) {
    has_spare_ = false;
    z = spare_;
  } else {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    z = r * std::cos(theta);
    spare_ = r * std::sin(theta);
    has_spare_ = true;
  }
  return mean + stddev * z;
}

int RngStream::categorical(const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("categorical: empty vector");
  const double u = uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Floating-point residue: fall back to the last positive entry.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

int RngStream::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

}  // namespace bandit_coord
