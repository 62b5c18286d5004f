#ifndef AUTORISK_RNG_HPP
#define AUTORISK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

#include "autorisk/errors.hpp"

namespace autorisk {

// Seeded generator with a fully specified output sequence so fixtures can
// be matched from other languages:
//   raw()        - the n-th output of std::mt19937_64 seeded with `seed`
//                  (the standard Mersenne Twister mt19937_64 stream).
//   uniform01()  - one raw() mapped to [0,1) as (raw >> 11) * 2^-53.
//   normal()     - Box-Muller on exactly two uniform01() draws u1, u2:
//                  sqrt(-2 ln(1-u1)) * cos(2 pi u2).
//   below(p)     - one uniform01() compared against p.
//   categorical(w) - one uniform01() u; returns the first index i with
//                  u * sum(w) < w[0] + ... + w[i].
//   pick(n)      - one uniform01(); floor(u * n).
// Every helper consumes the stated number of raw draws and nothing else.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  double uniform01() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  bool below(double p) { return uniform01() < p; }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log1p(-u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::size_t categorical(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) {
      if (!(w >= 0)) throw InvalidConfig("categorical weights must be >= 0");
      total += w;
    }
    if (!(total > 0)) throw InvalidConfig("categorical weights sum to zero");
    const double x = uniform01() * total;
    double cum = 0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (x < cum) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  std::size_t pick(std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace autorisk

#endif
