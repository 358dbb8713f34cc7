#pragma once
// Desk-scale cross-checks of fast paths against the oracles (CLI `verify`).

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ofdr {

struct VerifyOptions {
  std::size_t streams = 20;
  std::size_t max_t = 12;
  std::size_t ledger_length = 2000;
  std::uint64_t seed = 1;
  double delta = 0.1;
};

struct VerifyCheck {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;
};

/// Mixed null / non-null e-values: nulls are Gaussian likelihood ratios under the
/// null, non-nulls under a shifted mean; about 10% are exactly zero.
std::vector<double> mixed_e_values(std::mt19937_64& rng, std::size_t n, double pi1 = 0.4);
/// Mixed p-values: uniform nulls, non-nulls concentrated near zero.
std::vector<double> mixed_p_values(std::mt19937_64& rng, std::size_t n, double pi1 = 0.4);

std::vector<VerifyCheck> run_verification(const VerifyOptions& options);

}  // namespace ofdr
