#pragma once
// Small deterministic generators for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ofdr/core.hpp"

namespace gen {

// splitmix64
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool coin(double p) { return uniform() < p; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t s_;
};

// Likelihood-ratio e-values: nulls N(0,1), non-nulls N(mu,1); some exact zeros,
// an occasional huge value.
inline std::vector<double> e_stream(Rng& rng, std::size_t n, double pi1 = 0.4) {
  std::vector<double> out(n);
  for (auto& e : out) {
    const double mu = rng.uniform(1.0, 4.0);
    const double x = rng.normal() + (rng.coin(pi1) ? mu : 0.0);
    e = std::exp(mu * x - 0.5 * mu * mu);
    if (rng.coin(0.08)) e = 0.0;
    if (rng.coin(0.02)) e = 1e6;
  }
  return out;
}

inline std::vector<double> p_stream(Rng& rng, std::size_t n, double pi1 = 0.4) {
  std::vector<double> out(n);
  for (auto& p : out) {
    const double u = rng.uniform();
    p = rng.coin(pi1) ? std::pow(u, 6.0) * 0.05 : u;
    if (rng.coin(0.03)) p = 0.0;
    if (rng.coin(0.03)) p = 1.0;
  }
  return out;
}

// Nonincreasing head of n weights summing to at most one, continued by the default rule.
inline ofdr::GammaSequence decreasing_gamma(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (auto& x : w) x = rng.uniform(0.05, 1.0);
  std::sort(w.begin(), w.end(), std::greater<>());
  double total = 0.0;
  for (double x : w) total += x;
  const double scale = rng.uniform(0.3, 0.95) / total;
  for (auto& x : w) x *= scale;
  const double last = w.back();
  return ofdr::GammaSequence::tabulated(
      w, ofdr::GammaSequence("tail", [last](std::size_t t) { return last * 1e-3 / double(t * t); }));
}

}  // namespace gen
