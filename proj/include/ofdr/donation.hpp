#pragma once
// Donation procedures built on gamma-weighted compound e-values.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ofdr/core.hpp"
#include "ofdr/procedure.hpp"
#include "ofdr/wealth_ledger.hpp"

namespace ofdr {

/// (r + 1) / (1 - min(delta (r + 1) W, 1)); +inf when the cap reaches 1.
double donation_multiplier(double delta, std::size_t num_rejections, double wealth);

/// delta gamma_t times the multiplier. Zero when gamma_t = 0.
double donation_elond_level(double delta, double gamma_t, std::size_t num_rejections, double wealth);

/// (delta gamma_t / l_t) (floor(multiplier) ^ t), capped at 1. A saturated cap
/// (infinite multiplier) gives 1, matching donation e-LOND on calibrated values.
double donation_rlond_level(double delta, double gamma_t, std::size_t num_rejections, double wealth,
                            std::size_t t, double ell_t);

class DonationProcedureBase : public OnlineProcedure {
 public:
  using OnlineProcedure::OnlineProcedure;
  bool reports_wealth() const override { return true; }
  const WealthLedger& ledger() const { return ledger_; }
  /// Steps at which the wealth term came out below -1e-9.
  std::size_t negative_wealth_events() const { return negative_wealth_; }

 protected:
  double query_wealth(std::size_t num_rejections);

  WealthLedger ledger_;
  std::size_t negative_wealth_ = 0;
};

class DonationElond : public DonationProcedureBase {
 public:
  using DonationProcedureBase::DonationProcedureBase;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "donation-elond"; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;
};

/// Wealth is built from calibrated e-values f_i(P_i).
class DonationRlond : public DonationProcedureBase {
 public:
  using DonationProcedureBase::DonationProcedureBase;
  EvidenceKind kind() const override { return EvidenceKind::p_value; }
  std::string name() const override { return "donation-rlond"; }

 protected:
  StepOutcome advance(std::size_t t, double p, std::size_t deadline) override;
};

/// One candidate for the donation e-BH family scan.
struct DonationItem {
  std::size_t index;
  double gamma;
  double e;
  double x;  // gamma * e
};

/// Orders by gamma E descending, then index ascending.
bool donation_order(const DonationItem& a, const DonationItem& b);

/// For items sorted by donation_order, returns the largest j in [0, m] such that
///   sum_{i <= j} min(x_i - c, gamma_i) + sum_{i > j} gamma_i (E_i ^ 1) + outside(c) >= 0
/// with c = 1/(delta (offset + j)), or nullopt when no j qualifies. j = 0 with
/// offset = 0 uses c = +inf. Fenwick trees over the split key gamma (E - 1) give
/// O(m log m) per call.
std::optional<std::size_t> donation_scan(std::span<const DonationItem> sorted, std::size_t offset,
                                         double delta,
                                         const std::function<double(double)>& outside);

class DonationOnlineEbh : public DonationProcedureBase {
 public:
  using DonationProcedureBase::DonationProcedureBase;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "donation-online-ebh"; }
  bool reports_wealth() const override { return false; }
  std::size_t current_r() const { return r_; }
  /// Steps where R_{t-1} was not contained in the top r_t items.
  std::size_t nesting_conflicts() const { return conflicts_; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;

 private:
  std::vector<DonationItem> sorted_;
  std::size_t r_ = 0;
  std::size_t conflicts_ = 0;
};

/// Expired hypotheses move into the wealth ledger; candidates r range over
/// {b, ..., b + m_t} with b = |R_{t-1} \ A_t|.
class DonationEtoad : public DonationProcedureBase {
 public:
  using DonationProcedureBase::DonationProcedureBase;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "donation-etoad"; }
  bool reports_wealth() const override { return false; }
  std::size_t current_r() const { return r_; }
  std::size_t nesting_conflicts() const { return conflicts_; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;

 private:
  struct Active {
    DonationItem item;
    std::size_t deadline;
  };
  std::vector<Active> active_;
  std::size_t r_ = 0;
  std::size_t conflicts_ = 0;
};

enum class ScanMode { ebh, donation_ebh, etoad, donation_etoad };

/// A hypothesis in a one-shot r computation. `active` and `rejected` matter for the
/// deadline modes only: inactive items have expired, and inactive rejected items
/// count toward b = |R_{t-1} \ A_t|.
struct ScanItem {
  double gamma = 0.0;
  double e = 0.0;
  bool active = true;
  bool rejected = false;
};

/// The r selected by the fast machinery of the online procedures for one snapshot.
/// Deadline modes range over {b, ..., max(b, m)} (etoad) or {b, ..., b + m}
/// (donation-etoad). Returns 0 when no candidate qualifies.
std::size_t fast_r_scan(std::span<const ScanItem> items, double delta, ScanMode mode);

/// Offline donation e-BH with gamma_i = 1/m; rejected 1-based indices ascending.
IndexSet donation_ebh_offline(std::span<const double> e_values, double delta);

/// Restricted stochastic rounding. alpha_hat >= 1 passes x through.
/// Throws DomainError for alpha_hat <= 0, u outside [0, 1] or negative x.
double restricted_round(double x, double alpha_hat, double u);

/// alpha_hat / (u (1 - alpha_hat) + alpha_hat), or alpha_hat itself when alpha_hat >= 1.
double randomized_level(double alpha_hat, double u);

/// Randomized donation e-LOND. Draws one uniform per step from a seeded
/// generator; rejected hypotheses enter the ledger with their rounded value.
class RandomizedDonationElond : public DonationProcedureBase {
 public:
  /// Throws ConfigError without a seed.
  RandomizedDonationElond(GammaSequence gamma, double delta, std::optional<std::uint64_t> seed);
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "randomized-donation-elond"; }

  /// Steps with an externally supplied draw instead of the generator.
  StepOutcome step_with_draw(double e, double u);
  /// Deterministic part of the last level.
  double last_alpha_hat() const { return alpha_hat_; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;

 private:
  double draw();

  std::mt19937_64 rng_;
  std::optional<double> forced_u_;
  double alpha_hat_ = 0.0;
};

}  // namespace ofdr
