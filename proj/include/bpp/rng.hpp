#ifndef BPP_RNG_HPP
#define BPP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace bpp {

// Deterministic random stream. mt19937_64 output is fixed by the standard and
// all variate transforms are spelled out here, so a given seed reproduces the
// same stream on every platform. Replica streams are derived from a master
// seed by a counter hash: stream r uses splitmix64(master + GOLDEN*(r+1)),
// so any replica can be reproduced in isolation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static RngStream replica(std::uint64_t master, std::uint64_t index) {
    return RngStream(master + kGolden * (index + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Exponential with the given rate, via inversion.
  double exponential(double rate) {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return -std::log(u) / rate;
  }

  // Uniform integer in [0, bound), rejection-free multiply-shift is avoided
  // to keep the draw exactly reproducible as an integer operation.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bpp

#endif  // BPP_RNG_HPP
