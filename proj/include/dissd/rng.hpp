#ifndef DISSD_RNG_HPP
#define DISSD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace dissd {

// 64-bit SplitMix generator (Steele/Lea/Flood constants). The state advances
// by the golden-gamma increment and every output is a finalizer hash of the
// state, so each draw is a pure function of (seed, stream, draw index) and
// reproduces bit-for-bit across platforms and thread counts. Streams give
// machines, the unlabeled pool, and repetitions their own non-overlapping
// sequences: Rng(seed, stream) with stream = machine index is the stream API
// used throughout.
class Rng {
 public:
  static constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + kGoldenGamma) ^ mix(stream * kGoldenGamma + 0x5851F42D4C957F2Dull)) {}

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return mix(state_);
  }

  // [0, 1) with 53 random bits
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1), symmetric about 1/2
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Standard Cauchy by inverse CDF: tan(pi (U - 1/2)) with U in (0,1).
  double cauchy() { return std::tan(kPi * (uniform_open() - 0.5)); }

  // 0.9 N(0,1) + 0.1 N(0,100): the component indicator is drawn first.
  double mixture_normal() {
    const double u = uniform01();
    const double z = normal();
    return u < 0.9 ? z : 10.0 * z;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  // murmur3-style 64-bit finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dissd

#endif  // DISSD_RNG_HPP
