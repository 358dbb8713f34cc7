#include "ofdr/donation.hpp"
#include "ofdr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ofdr/calibration.hpp"

namespace ofdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fenwick tree over positions 0..n-1 holding (sum x, count, sum gamma).
class SplitFenwick {
 public:
  explicit SplitFenwick(std::size_t n) : x_(n + 1, 0.0), g_(n + 1, 0.0), c_(n + 1, 0) {}

  void add(std::size_t pos, double x, double g) {
    for (std::size_t i = pos + 1; i < x_.size(); i += i & (~i + 1)) {
      x_[i] += x;
      g_[i] += g;
      c_[i] += 1;
    }
  }

  /// Sums over positions [0, pos).
  void prefix(std::size_t pos, double& x, double& g, std::size_t& c) const {
    x = 0.0;
    g = 0.0;
    c = 0;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) {
      x += x_[i];
      g += g_[i];
      c += c_[i];
    }
  }

 private:
  std::vector<double> x_;
  std::vector<double> g_;
  std::vector<std::size_t> c_;
};

}  // namespace

double donation_multiplier(double delta, std::size_t num_rejections, double wealth) {
  const double r1 = static_cast<double>(num_rejections + 1);
  const double cap = std::min(delta * r1 * wealth, 1.0);
  if (cap >= 1.0) return kInf;
  return r1 / (1.0 - cap);
}

double donation_elond_level(double delta, double gamma_t, std::size_t num_rejections, double wealth) {
  const double dg = delta * gamma_t;
  if (!(dg > 0.0)) return 0.0;
  return dg * donation_multiplier(delta, num_rejections, wealth);
}

double donation_rlond_level(double delta, double gamma_t, std::size_t num_rejections, double wealth,
                            std::size_t t, double ell_t) {
  const double dg = delta * gamma_t;
  if (!(dg > 0.0)) return 0.0;
  const double q = donation_multiplier(delta, num_rejections, wealth);
  // Saturated cap: the level is +inf, which caps to 1 for p-values.
  if (std::isinf(q)) return 1.0;
  return std::min(1.0, dg * std::min(std::floor(q), static_cast<double>(t)) / ell_t);
}

double DonationProcedureBase::query_wealth(std::size_t num_rejections) {
  const double threshold = 1.0 / (delta_ * static_cast<double>(num_rejections + 1));
  const double w = ledger_.wealth(threshold);
  if (w < -1e-9) ++negative_wealth_;
  return w;
}

StepOutcome DonationElond::advance(std::size_t t, double e, std::size_t) {
  const double g = gamma(t);
  const std::size_t r = num_rejections();
  StepOutcome out;
  out.wealth = query_wealth(r);
  out.alpha = donation_elond_level(delta_, g, r, *out.wealth);
  out.decision = rejects_e(e, out.alpha);
  if (out.decision) {
    ledger_.insert(t, g, e);
    mark_rejected(t);
    out.newly_rejected.push_back(t);
  } else {
    ledger_.add_unrejected(t, g, e);
  }
  return out;
}

StepOutcome DonationRlond::advance(std::size_t t, double p, std::size_t) {
  const double g = gamma(t);
  const double ell_t = ell(t);
  const std::size_t r = num_rejections();
  const double e = calibrate_p(p, t, g, delta_, ell_t);
  StepOutcome out;
  out.wealth = query_wealth(r);
  out.alpha = donation_rlond_level(delta_, g, r, *out.wealth, t, ell_t);
  out.decision = rejects_p(p, out.alpha);
  if (out.decision) {
    ledger_.insert(t, g, e);
    mark_rejected(t);
    out.newly_rejected.push_back(t);
  } else {
    ledger_.add_unrejected(t, g, e);
  }
  return out;
}

// ---------------------------------------------------------------------------

bool donation_order(const DonationItem& a, const DonationItem& b) {
  return a.x > b.x || (a.x == b.x && a.index < b.index);
}

std::optional<std::size_t> donation_scan(std::span<const DonationItem> sorted, std::size_t offset,
                                         double delta,
                                         const std::function<double(double)>& outside) {
  const std::size_t m = sorted.size();
  std::vector<double> keys(m);
  for (std::size_t i = 0; i < m; ++i) keys[i] = sorted[i].gamma * (sorted[i].e - 1.0);
  std::vector<double> uniq = keys;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  std::vector<double> tail(m + 1, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    tail[i] = tail[i + 1] + sorted[i].gamma * std::min(sorted[i].e, 1.0);
  }

  SplitFenwick tree(uniq.size());
  double gamma_top = 0.0;
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j <= m; ++j) {
    if (j > 0) {
      const DonationItem& it = sorted[j - 1];
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(uniq.begin(), uniq.end(), keys[j - 1]) - uniq.begin());
      tree.add(pos, it.x, it.gamma);
      gamma_top += it.gamma;
    }
    const std::size_t r = offset + j;
    const double c = r == 0 ? kInf : 1.0 / (delta * static_cast<double>(r));
    double sx = 0.0;
    double sg = 0.0;
    std::size_t n = 0;
    if (j > 0) {
      const auto pos =
          static_cast<std::size_t>(std::upper_bound(uniq.begin(), uniq.end(), c) - uniq.begin());
      tree.prefix(pos, sx, sg, n);
    }
    const double low = n == 0 ? 0.0 : sx - c * static_cast<double>(n);
    const double value = low + (gamma_top - sg) + tail[j] + outside(c);
    if (value >= 0.0) best = j;
  }
  return best;
}

StepOutcome DonationOnlineEbh::advance(std::size_t t, double e, std::size_t) {
  const double g = gamma(t);
  const DonationItem item{t, g, e, g * e};
  sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), item, donation_order), item);
  const auto best = donation_scan(sorted_, 0, delta_, [](double) { return 0.0; });
  StepOutcome out;
  out.alpha = std::numeric_limits<double>::quiet_NaN();
  if (best) {
    r_ = std::max(r_, *best);
    std::vector<char> top(t + 1, 0);
    for (std::size_t j = 0; j < *best; ++j) {
      const std::size_t i = sorted_[j].index;
      top[i] = 1;
      if (!is_rejected(i)) {
        mark_rejected(i);
        out.newly_rejected.push_back(i);
      }
    }
    for (std::size_t i : rejected()) {
      if (!top[i]) {
        ++conflicts_;
        break;
      }
    }
  }
  std::sort(out.newly_rejected.begin(), out.newly_rejected.end());
  out.decision = is_rejected(t);
  return out;
}

StepOutcome DonationEtoad::advance(std::size_t t, double e, std::size_t deadline) {
  auto expired = std::stable_partition(active_.begin(), active_.end(),
                                       [t](const Active& a) { return a.deadline >= t; });
  for (auto it = expired; it != active_.end(); ++it) {
    const DonationItem& d = it->item;
    if (is_rejected(d.index)) {
      ledger_.insert(d.index, d.gamma, d.e);
    } else {
      ledger_.add_unrejected(d.index, d.gamma, d.e);
    }
  }
  active_.erase(expired, active_.end());

  const double g = gamma(t);
  const Active fresh{{t, g, e, g * e}, deadline};
  active_.insert(std::upper_bound(active_.begin(), active_.end(), fresh,
                                  [](const Active& a, const Active& b) {
                                    return donation_order(a.item, b.item);
                                  }),
                 fresh);

  std::vector<DonationItem> items;
  items.reserve(active_.size());
  for (const auto& a : active_) items.push_back(a.item);
  const std::size_t b = ledger_.size();
  const auto best =
      donation_scan(items, b, delta_, [this](double c) { return ledger_.wealth(c); });

  StepOutcome out;
  out.alpha = std::numeric_limits<double>::quiet_NaN();
  if (best) {
    r_ = b + *best;
    for (std::size_t j = 0; j < *best; ++j) {
      const std::size_t i = items[j].index;
      if (!is_rejected(i)) {
        mark_rejected(i);
        out.newly_rejected.push_back(i);
      }
    }
    for (std::size_t j = *best; j < items.size(); ++j) {
      if (is_rejected(items[j].index) &&
          std::find(out.newly_rejected.begin(), out.newly_rejected.end(), items[j].index) ==
              out.newly_rejected.end()) {
        ++conflicts_;
        break;
      }
    }
  }
  std::sort(out.newly_rejected.begin(), out.newly_rejected.end());
  out.decision = is_rejected(t);
  return out;
}

// ---------------------------------------------------------------------------

IndexSet donation_ebh_offline(std::span<const double> e_values, double delta) {
  validate_delta(delta);
  const std::size_t m = e_values.size();
  if (m == 0) throw DomainError("donation e-BH needs at least one e-value");
  for (double e : e_values) validate_e_value(e);
  // (-E, index) pairs sort contiguously into descending E with ties by index.
  std::vector<std::pair<double, std::size_t>> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = {-e_values[i], i};
  std::sort(order.begin(), order.end());
  // Everything below is scaled by m, so gamma_i = 1/m becomes 1.
  std::vector<double> prefix(m + 1, 0.0);
  std::vector<double> tail(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] - order[i].first;
  for (std::size_t i = m; i-- > 0;) tail[i] = tail[i + 1] + std::min(-order[i].first, 1.0);

  const double md = static_cast<double>(m);
  std::size_t above = 0;  // #{i: E_(i) - tau >= 1}, nondecreasing in r
  std::size_t best = 0;
  for (std::size_t r = 1; r <= m; ++r) {
    const double tau = md / (delta * static_cast<double>(r));
    while (above < m && -order[above].first - tau >= 1.0) ++above;
    const std::size_t k = std::min(above, r);
    const double top = static_cast<double>(k) + (prefix[r] - prefix[k]) -
                       static_cast<double>(r - k) * tau;
    if (top + tail[r] >= 0.0) best = r;
  }
  IndexSet out(best);
  for (std::size_t i = 0; i < best; ++i) out[i] = order[i].second + 1;
  std::sort(out.begin(), out.end());
  return out;
}

double restricted_round(double x, double alpha_hat, double u) {
  if (!(alpha_hat > 0.0)) throw DomainError("rounding level must be positive");
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("uniform draw must lie in [0, 1]");
  if (!(x >= 0.0)) throw DomainError("rounded statistic must be nonnegative");
  if (alpha_hat >= 1.0) return x;
  const double top = 1.0 / alpha_hat;
  if (x <= 1.0 || x >= top) return x;
  return u <= alpha_hat * (x - 1.0) / (1.0 - alpha_hat) ? top : 1.0;
}

double randomized_level(double alpha_hat, double u) {
  if (!(alpha_hat > 0.0)) return 0.0;
  if (alpha_hat >= 1.0) return alpha_hat;
  return alpha_hat / (u * (1.0 - alpha_hat) + alpha_hat);
}

RandomizedDonationElond::RandomizedDonationElond(GammaSequence gamma, double delta,
                                                 std::optional<std::uint64_t> seed)
    : DonationProcedureBase(std::move(gamma), delta) {
  if (!seed) throw ConfigError("randomized donation e-LOND needs an RNG seed");
  rng_.seed(*seed);
}

double RandomizedDonationElond::draw() {
  // 53 random bits mapped to [0, 1).
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

StepOutcome RandomizedDonationElond::step_with_draw(double e, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("uniform draw must lie in [0, 1]");
  forced_u_ = u;
  try {
    StepOutcome out = step(e);
    forced_u_.reset();
    return out;
  } catch (...) {
    forced_u_.reset();
    throw;
  }
}

StepOutcome RandomizedDonationElond::advance(std::size_t t, double e, std::size_t) {
  const double g = gamma(t);
  const std::size_t r = num_rejections();
  const double u = forced_u_ ? *forced_u_ : draw();
  StepOutcome out;
  out.wealth = query_wealth(r);
  alpha_hat_ = donation_elond_level(delta_, g, r, *out.wealth);
  out.alpha = randomized_level(alpha_hat_, u);
  out.decision = rejects_e(e, out.alpha);
  if (out.decision) {
    // A rejection below 1/alpha_hat happens exactly when the rounding lands on 1/alpha_hat.
    const bool rounded_up = alpha_hat_ < 1.0 && e > 1.0 && e < 1.0 / alpha_hat_;
    ledger_.insert(t, g, rounded_up ? 1.0 / alpha_hat_ : e);
    mark_rejected(t);
    out.newly_rejected.push_back(t);
  } else {
    ledger_.add_unrejected(t, g, e);
  }
  return out;
}

}  // namespace ofdr

namespace ofdr {

std::size_t fast_r_scan(std::span<const ScanItem> items, double delta, ScanMode mode) {
  validate_delta(delta);
  const bool deadline_mode = mode == ScanMode::etoad || mode == ScanMode::donation_etoad;
  std::size_t b = 0;
  WealthLedger ledger;
  std::vector<DonationItem> active;
  std::vector<std::size_t> ranks;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const ScanItem& it = items[i];
    if (deadline_mode && !it.active) {
      if (it.rejected) {
        ++b;
        ledger.insert(i + 1, it.gamma, it.e);
      } else {
        ledger.add_unrejected(i + 1, it.gamma, it.e);
      }
      continue;
    }
    active.push_back({i + 1, it.gamma, it.e, it.gamma * it.e});
    ranks.push_back(min_passing_rank(it.e, delta * it.gamma));
  }
  const std::size_t m = active.size();
  switch (mode) {
    case ScanMode::ebh:
    case ScanMode::etoad: {
      std::sort(ranks.begin(), ranks.end());
      const std::size_t lo = mode == ScanMode::ebh ? 1 : b;
      const std::size_t hi = mode == ScanMode::ebh ? m : std::max(b, m);
      for (std::size_t r = hi; r >= lo && r > 0; --r) {
        const auto count = static_cast<std::size_t>(
            std::upper_bound(ranks.begin(), ranks.end(), r) - ranks.begin());
        if (count + b >= r) return r;
      }
      return mode == ScanMode::ebh ? 0 : b;
    }
    case ScanMode::donation_ebh:
    case ScanMode::donation_etoad: {
      std::sort(active.begin(), active.end(), donation_order);
      const auto best = donation_scan(active, b, delta, [&](double c) { return ledger.wealth(c); });
      if (!best) return 0;
      if (mode == ScanMode::donation_ebh && *best == 0) return 0;
      return b + *best;
    }
  }
  return 0;
}

}  // namespace ofdr
