#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ckm {

// Seedable generator used everywhere randomness is needed. The mapping from
// seed to output stream is pinned: mt19937_64 for raw bits, uniforms as the
// top 53 bits scaled, normals by Box-Muller on that uniform stream. Sketch
// files store the frequency matrix explicitly, so no other implementation
// ever has to reproduce this stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [a, b); returns a when the interval is degenerate.
  double uniform(double a, double b) {
    if (a == b) return a;
    return a + (b - a) * uniform();
  }

  // Standard normal. Box-Muller; the second deviate of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  // Uniform index in [0, n). Modulo bias is below 2^-50 for any n that fits
  // in memory.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ckm
