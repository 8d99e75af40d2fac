#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nsmab {

// SplitMix64 finalizer, used to derive well-separated seeds from
// (root_seed, trial, stream) coordinates.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t trial,
                                 std::uint64_t stream) {
  std::uint64_t s = splitmix64(root ^ 0x632be59bd9b4e019ULL);
  s = splitmix64(s ^ splitmix64(trial ^ 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ splitmix64(stream ^ 0xd1b54a32d192ed03ULL));
  return s;
}

// Deterministic random source. The standard library distributions are not
// bit-stable across implementations, so all sampling goes through these
// helpers on top of mt19937_64 (which is specified exactly).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; never zero, safe under log().
  double uniform01_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller; consumes two engine draws per sample.
  double normal(double mean, double stddev) {
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [lo, hi], inclusive.
  long uniform_int(long lo, long hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    long v = lo + static_cast<long>(uniform01() * span);
    return v > hi ? hi : v;
  }

  // Fair +-1 coin.
  double sign() { return uniform01() < 0.5 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 engine_;
};

// Per-trial seed coordinates. Every arm and the policy get their own
// stream so that trial-level parallelism and pull interleaving can never
// perturb another component's randomness.
struct TrialSeed {
  std::uint64_t root = 1;
  std::uint64_t trial = 0;

  RandomStream arm_stream(long arm) const {
    return RandomStream(derive_seed(root, trial, static_cast<std::uint64_t>(arm)));
  }
  RandomStream policy_stream() const {
    return RandomStream(derive_seed(root, trial, 0xfffffffffffffffeULL));
  }
  RandomStream aux_stream(std::uint64_t tag) const {
    return RandomStream(derive_seed(root, trial, 0x8000000000000000ULL ^ tag));
  }
};

}  // namespace nsmab
