#pragma once
// Increasing e-collections, closure membership, and the closed procedures
// C-eLOND, alternative-gamma C-eLOND and closed r-LOND.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ofdr/core.hpp"
#include "ofdr/procedure.hpp"

namespace ofdr {

enum class ECollectionKind {
  reset,             // E_S = sum_{i in S} gamma_{|S cap [i]|} E_i
  gap,               // E_S = sum_j (gamma_{s_{j-1}+1} + ... + gamma_{s_j}) E_{s_j}
  calibrated_reset,  // reset collection over calibrated p-values f_k(P_i)
};

/// Stored stream prefix. values are e-values, or p-values for calibrated_reset.
struct EHistory {
  std::vector<double> gammas;  // gammas[i-1] = gamma_i
  std::vector<double> values;  // values[i-1] = E_i or P_i
  double delta = 0.1;          // used by calibrated_reset only
};

/// E_S for sorted S. Throws DomainError for indices outside [1, values.size()]
/// or when gammas is shorter than required.
double ecollection_value(ECollectionKind kind, std::span<const std::size_t> S, const EHistory& h);

using SubsetEValue = std::function<double(std::span<const std::size_t>)>;

/// True iff E_S >= FDP_S(R)/delta for all S in 2^[t]. Exhaustive; throws
/// CapabilityError when t > max_t.
bool closure_membership(std::span<const std::size_t> R, std::size_t t, const SubsetEValue& e_of,
                        double delta, std::size_t max_t = 20);
bool closure_membership(std::span<const std::size_t> R, std::size_t t, ECollectionKind kind,
                        const EHistory& h, std::size_t max_t = 20);

/// Inputs to a closed level at time t = values.size() + 1.
struct LevelContext {
  std::span<const double> gammas;     // at least t entries
  std::span<const double> values;     // E_i or P_i for i < t
  std::span<const char> rejected;     // rejected[i-1] != 0 iff i in R_{t-1}; size >= t-1
  std::size_t num_rejected = 0;
  double delta = 0.1;
  std::span<const double> harmonics;  // l_1..l_t, optional (computed when empty)
};

/// floor(x) after lifting x by 1e-9 relative, so ratios that are integers in exact
/// arithmetic are not pushed down by rounding.
double snapped_floor(double x);

/// C-eLOND level via the v_t(i, k) recurrence with two rolling rows; +inf when
/// every constraint is vacuous.
double closed_elond_level(const LevelContext& ctx);
/// Alternative-gamma C-eLOND level via a DP over the last selected index.
double closed_elond_alt_level(const LevelContext& ctx);
/// Closed r-LOND level via the g_t(i, k) recurrence, capped at 1. With
/// restrict_to_rejected, transitions only consider indices in R_{t-1}; this
/// shortcut is not exact (it can return a larger level), does not control
/// sup-FDR in simulation, and is not in the procedure registry.
double closed_rlond_level(const LevelContext& ctx, bool restrict_to_rejected = false);

/// Shared bookkeeping for closed procedures: stores gammas, values and flags.
class ClosedProcedureBase : public OnlineProcedure {
 public:
  using OnlineProcedure::OnlineProcedure;

 protected:
  StepOutcome finish(std::size_t t, double value, double alpha, bool decision);
  LevelContext context(std::size_t t);

  std::vector<double> gammas_;
  std::vector<double> values_;
  std::vector<char> flags_;
  std::vector<double> harmonics_;
};

class ClosedElond : public ClosedProcedureBase {
 public:
  using ClosedProcedureBase::ClosedProcedureBase;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "closed-elond"; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;
};

class ClosedElondAlt : public ClosedProcedureBase {
 public:
  using ClosedProcedureBase::ClosedProcedureBase;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "closed-elond-alt"; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;
};

class ClosedRlond : public ClosedProcedureBase {
 public:
  ClosedRlond(GammaSequence gamma, double delta, bool restrict_to_rejected = false)
      : ClosedProcedureBase(std::move(gamma), delta), restrict_(restrict_to_rejected) {}
  EvidenceKind kind() const override { return EvidenceKind::p_value; }
  std::string name() const override { return restrict_ ? "closed-rlond-restricted" : "closed-rlond"; }

 protected:
  StepOutcome advance(std::size_t t, double p, std::size_t deadline) override;

 private:
  bool restrict_;
};

}  // namespace ofdr
