#include "ofdr/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "ofdr/core.hpp"

namespace ofdr {

std::size_t calibration_rank(double p, double delta_gamma, std::size_t t, double ell_t) {
  if (!(delta_gamma > 0.0)) return 0;
  if (!(p <= delta_gamma * static_cast<double>(t) / ell_t)) return 0;
  const double scaled = std::max(p * ell_t / delta_gamma, 1.0);
  return static_cast<std::size_t>(std::ceil(scaled));
}

double calibrated_unit(double p, double delta_gamma, std::size_t t, double ell_t) {
  const std::size_t k = calibration_rank(p, delta_gamma, t, ell_t);
  return k == 0 ? 0.0 : 1.0 / static_cast<double>(k);
}

double calibrate_p(double p, std::size_t t, double gamma_t, double delta, double ell_t) {
  validate_p_value(p);
  if (t == 0) throw DomainError("calibrator index must be >= 1");
  const double dg = delta * gamma_t;
  const std::size_t k = calibration_rank(p, dg, t, ell_t);
  return k == 0 ? 0.0 : 1.0 / (dg * static_cast<double>(k));
}

double calibrate_p(double p, std::size_t t, double gamma_t, double delta) {
  if (t == 0) throw DomainError("calibrator index must be >= 1");
  return calibrate_p(p, t, gamma_t, delta, harmonic(t));
}

double reshape_beta(double r, std::size_t t) {
  if (!(r >= 0.0)) throw DomainError("reshaping argument must be nonnegative");
  if (t == 0) throw DomainError("reshaping index must be >= 1");
  const double capped = std::min(std::floor(r), static_cast<double>(t));
  return capped / harmonic(t);
}

}  // namespace ofdr
