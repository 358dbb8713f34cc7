#pragma once
// Slow reference implementations used to check the fast paths.

#include <cstddef>
#include <span>

#include "ofdr/closure.hpp"
#include "ofdr/core.hpp"
#include "ofdr/donation.hpp"

namespace ofdr {

struct OracleBudget {
  std::size_t max_t_exhaustive = 16;
  std::size_t max_t_scan = 5000;
};

/// Exact minimization over all S subset of [t-1] of the closed level for `kind`:
/// reset gives C-eLOND, gap gives alternative-gamma C-eLOND, calibrated_reset gives
/// closed r-LOND. Subsets are visited in Gray-code order. Throws CapabilityError
/// when t exceeds the budget.
double brute_closure_level(ECollectionKind kind, const LevelContext& ctx,
                           const OracleBudget& budget = {});

/// W_t by direct summation over the stored prefix (items i < t).
double naive_wealth(std::span<const double> gammas, std::span<const double> e_values,
                    std::span<const char> rejected, double delta);

/// Largest r satisfying the defining predicate of `mode`, by evaluating it for
/// every candidate. Same conventions as fast_r_scan.
std::size_t brute_r_scan(std::span<const ScanItem> items, double delta, ScanMode mode,
                         const OracleBudget& budget = {});

/// True iff e_tilde_i >= 1/(delta gamma_i |R|) for every i in R (1-based).
bool self_consistency_check(std::span<const std::size_t> R, std::span<const double> gammas,
                            std::span<const double> e_tilde, double delta);

}  // namespace ofdr
