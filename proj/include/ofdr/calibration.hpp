#pragma once
// p-value to e-value calibrator and the reshaping function used by r-LOND.

#include <cstddef>

namespace ofdr {

/// Rank k = ceil((p l_t / (delta gamma_t)) v 1) used by the calibrator, or 0 when
/// the indicator p <= delta gamma_t t / l_t fails (or delta gamma_t = 0).
std::size_t calibration_rank(double p, double delta_gamma, std::size_t t, double ell_t);

/// delta gamma_t f_t(p) = 1{...} / k, the scale-free part of the calibrator.
double calibrated_unit(double p, double delta_gamma, std::size_t t, double ell_t);

/// f_t(p). Returns 0 when gamma_t = 0 or the indicator fails.
/// Throws DomainError when p lies outside [0, 1] or t = 0.
double calibrate_p(double p, std::size_t t, double gamma_t, double delta);
/// Same, with a precomputed harmonic number l_t.
double calibrate_p(double p, std::size_t t, double gamma_t, double delta, double ell_t);

/// beta_t(r) = (floor(r) ^ t) / l_t.
double reshape_beta(double r, std::size_t t);

}  // namespace ofdr
