#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tic {

// Deterministic RNG. All transforms (uniform, normal) are hand-rolled on top
// of mt19937_64 output so streams are reproducible across standard libraries,
// which std::normal_distribution does not guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1) with 53 random bits.
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) { return int(next_u64() % std::uint64_t(n)); }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Normal(0, std) truncated to +/- 2 std by resampling.
  double trunc_normal(double stddev) {
    double x = normal();
    while (x < -2.0 || x > 2.0) x = normal();
    return x * stddev;
  }

  // Derived stream for a named sub-component; decorrelates via splitmix64.
  Rng fork(std::uint64_t stream) {
    std::uint64_t z = stream + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return Rng(next_u64() ^ z);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tic
