#include "ofdr/closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ofdr/calibration.hpp"

namespace ofdr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_indices(std::span<const std::size_t> S, const EHistory& h) {
  std::size_t prev = 0;
  for (std::size_t i : S) {
    if (i == 0 || i > h.values.size()) {
      throw DomainError("subset index " + std::to_string(i) + " outside the stored history");
    }
    if (i <= prev) throw DomainError("subset indices must be strictly increasing");
    prev = i;
  }
  if (h.gammas.size() < S.back()) throw DomainError("gamma history shorter than subset");
}

std::vector<double> harmonics_upto(std::size_t t) {
  HarmonicSeries hs;
  std::vector<double> out(t);
  for (std::size_t k = 1; k <= t; ++k) out[k - 1] = hs.value(k);
  return out;
}

}  // namespace

double ecollection_value(ECollectionKind kind, std::span<const std::size_t> S, const EHistory& h) {
  if (S.empty()) return 0.0;
  check_indices(S, h);
  double total = 0.0;
  switch (kind) {
    case ECollectionKind::reset:
      for (std::size_t j = 0; j < S.size(); ++j) total += h.gammas[j] * h.values[S[j] - 1];
      break;
    case ECollectionKind::gap: {
      std::size_t prev = 0;
      for (std::size_t s : S) {
        double mass = 0.0;
        for (std::size_t l = prev + 1; l <= s; ++l) mass += h.gammas[l - 1];
        total += mass * h.values[s - 1];
        prev = s;
      }
      break;
    }
    case ECollectionKind::calibrated_reset: {
      HarmonicSeries hs;
      for (std::size_t j = 0; j < S.size(); ++j) {
        const std::size_t k = j + 1;
        total += h.gammas[j] * calibrate_p(h.values[S[j] - 1], k, h.gammas[j], h.delta, hs.value(k));
      }
      break;
    }
  }
  return total;
}

bool closure_membership(std::span<const std::size_t> R, std::size_t t, const SubsetEValue& e_of,
                        double delta, std::size_t max_t) {
  validate_delta(delta);
  if (t > max_t) {
    throw CapabilityError("closure membership enumerates 2^t subsets; t = " + std::to_string(t) +
                          " exceeds the cap " + std::to_string(max_t));
  }
  if (R.empty()) return true;
  std::vector<char> in_r(t + 1, 0);
  for (std::size_t i : R) {
    if (i == 0 || i > t) throw DomainError("rejection index outside [1, t]");
    in_r[i] = 1;
  }
  const double denom = static_cast<double>(R.size());
  std::vector<std::size_t> S;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
    S.clear();
    std::size_t hits = 0;
    for (std::size_t i = 1; i <= t; ++i) {
      if (mask & (std::uint64_t{1} << (i - 1))) {
        S.push_back(i);
        hits += in_r[i];
      }
    }
    if (hits == 0) continue;
    const double fdp_s = static_cast<double>(hits) / denom;
    if (!(e_of(S) >= fdp_s / delta)) return false;
  }
  return true;
}

bool closure_membership(std::span<const std::size_t> R, std::size_t t, ECollectionKind kind,
                        const EHistory& h, std::size_t max_t) {
  return closure_membership(
      R, t, [&](std::span<const std::size_t> S) { return ecollection_value(kind, S, h); }, h.delta,
      max_t);
}

// ---------------------------------------------------------------------------

double snapped_floor(double x) { return std::floor(x + 1e-9 * std::abs(x)); }

double closed_elond_level(const LevelContext& ctx) {
  const std::size_t t = ctx.values.size() + 1;
  const double r1 = static_cast<double>(ctx.num_rejected + 1);
  const double c = ctx.delta * r1;
  std::vector<double> prev(t, kNegInf);
  std::vector<double> next(t, kNegInf);
  prev[0] = 0.0;
  next[0] = 0.0;
  const double* g = ctx.gammas.data();
  for (std::size_t i = 1; i < t; ++i) {
    const double ind = ctx.rejected[i - 1] ? 1.0 : 0.0;
    const double ce = c * ctx.values[i - 1];
    double* nx = next.data();
    const double* pv = prev.data();
    for (std::size_t k = 1; k <= i; ++k) {
      nx[k] = std::max(pv[k], pv[k - 1] + ind - ce * g[k - 1]);
    }
    std::swap(prev, next);
  }
  double alpha = kInfiniteLevel;
  for (std::size_t k = 0; k < t; ++k) {
    const double d = 1.0 + prev[k];
    if (d > 0.0) alpha = std::min(alpha, ctx.delta * g[k] * r1 / d);
  }
  return alpha;
}

double closed_elond_alt_level(const LevelContext& ctx) {
  const std::size_t t = ctx.values.size() + 1;
  const double r1 = static_cast<double>(ctx.num_rejected + 1);
  const double c = ctx.delta * r1;
  std::vector<double> prefix(t + 1, 0.0);
  for (std::size_t j = 1; j <= t; ++j) prefix[j] = prefix[j - 1] + ctx.gammas[j - 1];
  std::vector<double> best(t, kNegInf);
  best[0] = 0.0;
  for (std::size_t j = 1; j < t; ++j) {
    const double ind = ctx.rejected[j - 1] ? 1.0 : 0.0;
    const double ce = c * ctx.values[j - 1];
    double b = kNegInf;
    for (std::size_t p = 0; p < j; ++p) {
      b = std::max(b, best[p] + ind - ce * (prefix[j] - prefix[p]));
    }
    best[j] = b;
  }
  double alpha = kInfiniteLevel;
  for (std::size_t j = 0; j < t; ++j) {
    const double d = 1.0 + best[j];
    if (d > 0.0) alpha = std::min(alpha, ctx.delta * (prefix[t] - prefix[j]) * r1 / d);
  }
  return alpha;
}

double closed_rlond_level(const LevelContext& ctx, bool restrict_to_rejected) {
  const std::size_t t = ctx.values.size() + 1;
  std::vector<double> computed;
  std::span<const double> ells = ctx.harmonics;
  if (ells.size() < t) {
    computed = harmonics_upto(t);
    ells = computed;
  }
  const double r1 = static_cast<double>(ctx.num_rejected + 1);
  std::vector<double> prev(t, kNegInf);
  std::vector<double> next(t, kNegInf);
  prev[0] = 0.0;
  next[0] = 0.0;
  std::size_t depth = 0;  // largest k reachable so far
  for (std::size_t i = 1; i < t; ++i) {
    const bool in_r = ctx.rejected[i - 1] != 0;
    if (restrict_to_rejected && !in_r) continue;
    ++depth;
    const double ind = in_r ? 1.0 : 0.0;
    const double p = ctx.values[i - 1];
    for (std::size_t k = 1; k <= depth; ++k) {
      const double unit = calibrated_unit(p, ctx.delta * ctx.gammas[k - 1], k, ells[k - 1]);
      next[k] = std::max(prev[k], prev[k - 1] + ind - r1 * unit);
    }
    std::swap(prev, next);
  }
  double alpha = 1.0;
  for (std::size_t k = 0; k < t; ++k) {
    const double d = 1.0 + prev[k];
    if (!(d > 0.0)) continue;
    const double m = snapped_floor(std::min(r1 / d, static_cast<double>(k + 1)));
    alpha = std::min(alpha, ctx.delta * ctx.gammas[k] * m / ells[k]);
  }
  return alpha;
}

// ---------------------------------------------------------------------------

LevelContext ClosedProcedureBase::context(std::size_t t) {
  while (gammas_.size() < t) gammas_.push_back(gamma(gammas_.size() + 1));
  while (harmonics_.size() < t) harmonics_.push_back(ell(harmonics_.size() + 1));
  LevelContext ctx;
  ctx.gammas = gammas_;
  ctx.values = values_;
  ctx.rejected = flags_;
  ctx.num_rejected = num_rejections();
  ctx.delta = delta_;
  ctx.harmonics = harmonics_;
  return ctx;
}

StepOutcome ClosedProcedureBase::finish(std::size_t t, double value, double alpha, bool decision) {
  values_.push_back(value);
  flags_.push_back(decision ? 1 : 0);
  StepOutcome out;
  out.alpha = alpha;
  out.decision = decision;
  if (decision) {
    mark_rejected(t);
    out.newly_rejected.push_back(t);
  }
  return out;
}

StepOutcome ClosedElond::advance(std::size_t t, double e, std::size_t) {
  const double alpha = closed_elond_level(context(t));
  return finish(t, e, alpha, rejects_e(e, alpha));
}

StepOutcome ClosedElondAlt::advance(std::size_t t, double e, std::size_t) {
  const double alpha = closed_elond_alt_level(context(t));
  return finish(t, e, alpha, rejects_e(e, alpha));
}

StepOutcome ClosedRlond::advance(std::size_t t, double p, std::size_t) {
  const double alpha = closed_rlond_level(context(t), restrict_);
  return finish(t, p, alpha, rejects_p(p, alpha));
}

}  // namespace ofdr
