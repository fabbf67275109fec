#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace ccsim {

// Deterministic RNG with hand-rolled distributions so that a given seed
// reproduces the same draws on any platform. Each stochastic component
// (loss, jitter, probe timing) owns its own instance, so changing one
// component's draws does not perturb the others.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; avoids std::normal_distribution's unspecified algorithm.
  double gaussian(double mean, double sd) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mean + sd * mag * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable seed derivation for a named component (FNV-1a over the name,
// mixed with the base seed).
inline uint64_t derive_seed(uint64_t base, std::string_view component) {
  uint64_t h = 14695981039346656037ull;
  for (char c : component) {
    h ^= static_cast<uint8_t>(c);
    h *= 1099511628211ull;
  }
  return h ^ (base * 0x9e3779b97f4a7c15ull + 0xe3779b97f4a7c15ull);
}

}  // namespace ccsim
