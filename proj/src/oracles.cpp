#include "ofdr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ofdr/baselines.hpp"
#include "ofdr/calibration.hpp"

namespace ofdr {

double brute_closure_level(ECollectionKind kind, const LevelContext& ctx,
                           const OracleBudget& budget) {
  const std::size_t t = ctx.values.size() + 1;
  if (t > budget.max_t_exhaustive) {
    throw CapabilityError("exhaustive closure level limited to t <= " +
                          std::to_string(budget.max_t_exhaustive));
  }
  const double delta = ctx.delta;
  const double r1 = static_cast<double>(ctx.num_rejected + 1);
  std::vector<double> ells(t);
  {
    HarmonicSeries hs;
    for (std::size_t k = 1; k <= t; ++k) ells[k - 1] = hs.value(k);
  }

  auto level_for = [&](const std::vector<std::size_t>& S) -> double {
    const std::size_t k = S.size();
    std::size_t hits = 0;
    for (std::size_t i : S) hits += ctx.rejected[i - 1] ? 1 : 0;
    double e_s = 0.0;
    switch (kind) {
      case ECollectionKind::reset:
        for (std::size_t j = 0; j < k; ++j) e_s += ctx.gammas[j] * ctx.values[S[j] - 1];
        break;
      case ECollectionKind::gap: {
        std::size_t prev = 0;
        for (std::size_t s : S) {
          double mass = 0.0;
          for (std::size_t l = prev + 1; l <= s; ++l) mass += ctx.gammas[l - 1];
          e_s += mass * ctx.values[s - 1];
          prev = s;
        }
        break;
      }
      case ECollectionKind::calibrated_reset:
        for (std::size_t j = 0; j < k; ++j) {
          e_s += ctx.gammas[j] *
                 calibrate_p(ctx.values[S[j] - 1], j + 1, ctx.gammas[j], delta, ells[j]);
        }
        break;
    }
    if (kind == ECollectionKind::calibrated_reset) {
      const double scaled_gap = (1.0 + static_cast<double>(hits)) / r1 - delta * e_s;
      if (!(scaled_gap > 0.0)) return kInfiniteLevel;
      const double m = snapped_floor(std::min(1.0 / scaled_gap, static_cast<double>(k + 1)));
      return delta * ctx.gammas[k] * m / ells[k];
    }
    const double denom = 1.0 + static_cast<double>(hits) - delta * e_s * r1;
    if (!(denom > 0.0)) return kInfiniteLevel;
    double weight = ctx.gammas[k];
    if (kind == ECollectionKind::gap) {
      weight = 0.0;
      for (std::size_t l = (S.empty() ? 0 : S.back()) + 1; l <= t; ++l) weight += ctx.gammas[l - 1];
    }
    return delta * weight * r1 / denom;
  };

  std::vector<std::size_t> S;
  double best = level_for(S);
  const std::size_t n = t - 1;
  // Gray code: step g flips bit ctz(g).
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << n); ++g) {
    const std::size_t idx = static_cast<std::size_t>(__builtin_ctzll(g)) + 1;
    auto it = std::lower_bound(S.begin(), S.end(), idx);
    if (it != S.end() && *it == idx) {
      S.erase(it);
    } else {
      S.insert(it, idx);
    }
    best = std::min(best, level_for(S));
  }
  if (kind == ECollectionKind::calibrated_reset) best = std::min(best, 1.0);
  return best;
}

double naive_wealth(std::span<const double> gammas, std::span<const double> e_values,
                    std::span<const char> rejected, double delta) {
  const std::size_t n = e_values.size();
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) r += rejected[i] ? 1 : 0;
  const double c = 1.0 / (delta * static_cast<double>(r + 1));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rejected[i]) {
      total += std::min(gammas[i] * e_values[i] - c, gammas[i]);
    } else {
      total += gammas[i] * std::min(e_values[i], 1.0);
    }
  }
  return total;
}

std::size_t brute_r_scan(std::span<const ScanItem> items, double delta, ScanMode mode,
                         const OracleBudget& budget) {
  validate_delta(delta);
  if (items.size() > budget.max_t_scan) {
    throw CapabilityError("brute r scan limited to " + std::to_string(budget.max_t_scan) + " items");
  }
  const bool deadline_mode = mode == ScanMode::etoad || mode == ScanMode::donation_etoad;
  std::vector<std::size_t> act;
  std::vector<std::size_t> expired;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (deadline_mode && !items[i].active) {
      expired.push_back(i);
    } else {
      act.push_back(i);
    }
  }
  std::size_t b = 0;
  for (std::size_t i : expired) b += items[i].rejected ? 1 : 0;
  const std::size_t m = act.size();

  auto count_passing = [&](std::size_t r) {
    std::size_t count = 0;
    for (std::size_t i : act) count += passes_at(items[i].e, delta * items[i].gamma, r) ? 1 : 0;
    return count;
  };
  std::vector<std::size_t> order = act;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
    const double xa = items[a].gamma * items[a].e;
    const double xc = items[c].gamma * items[c].e;
    return xa > xc || (xa == xc && a < c);
  });
  auto donation_ok = [&](std::size_t r, std::size_t j) {
    const double c = r == 0 ? std::numeric_limits<double>::infinity()
                            : 1.0 / (delta * static_cast<double>(r));
    double total = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      const ScanItem& it = items[order[q]];
      total += q < j ? std::min(it.gamma * it.e - c, it.gamma) : it.gamma * std::min(it.e, 1.0);
    }
    for (std::size_t i : expired) {
      const ScanItem& it = items[i];
      total += it.rejected ? std::min(it.gamma * it.e - c, it.gamma)
                           : it.gamma * std::min(it.e, 1.0);
    }
    return total >= 0.0;
  };

  std::size_t best = 0;
  switch (mode) {
    case ScanMode::ebh:
      for (std::size_t r = 1; r <= m; ++r) {
        if (count_passing(r) >= r) best = r;
      }
      break;
    case ScanMode::etoad:
      for (std::size_t r = b; r <= std::max(b, m); ++r) {
        if (count_passing(r) + b >= r) best = r;
      }
      break;
    case ScanMode::donation_ebh:
      for (std::size_t r = 1; r <= m; ++r) {
        if (donation_ok(r, r)) best = r;
      }
      break;
    case ScanMode::donation_etoad:
      for (std::size_t r = b; r <= b + m; ++r) {
        if (donation_ok(r, r - b)) best = r;
      }
      break;
  }
  return best;
}

bool self_consistency_check(std::span<const std::size_t> R, std::span<const double> gammas,
                            std::span<const double> e_tilde, double delta) {
  for (std::size_t i : R) {
    if (i == 0 || i > gammas.size() || i > e_tilde.size()) {
      throw DomainError("index outside the supplied weights");
    }
    if (!passes_at(e_tilde[i - 1], delta * gammas[i - 1], R.size())) return false;
  }
  return true;
}

}  // namespace ofdr
