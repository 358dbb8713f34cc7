#pragma once
// Common interface for sequential testing procedures and the name registry.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ofdr/core.hpp"

namespace ofdr {

/// What a procedure reports after consuming one observation.
struct StepOutcome {
  /// Test level for the current hypothesis; NaN for set-valued rules (e-BH family)
  /// that do not expose a single level.
  double alpha = 0.0;
  /// Whether the current hypothesis is in R_t.
  bool decision = false;
  /// Indices added to the rejection set at this step (may include earlier ones).
  std::vector<std::size_t> newly_rejected;
  /// Wealth term used at this step, for donation procedures.
  std::optional<double> wealth;
};

/// Sequential procedure consuming one observation per step. Time starts at 1.
class OnlineProcedure {
 public:
  OnlineProcedure(GammaSequence gamma, double delta);
  virtual ~OnlineProcedure() = default;
  OnlineProcedure(const OnlineProcedure&) = delete;
  OnlineProcedure& operator=(const OnlineProcedure&) = delete;

  /// Validates the evidence for this procedure's kind and advances time.
  /// Deadlines are ignored except by deadline-aware rules.
  StepOutcome step(double evidence, std::size_t deadline = kNoDeadline);

  virtual EvidenceKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual bool reports_wealth() const { return false; }

  std::size_t time() const { return t_; }
  double delta() const { return delta_; }
  /// R_t in order of rejection.
  const IndexSet& rejected() const { return rejected_; }
  bool is_rejected(std::size_t i) const { return i < flags_.size() && flags_[i] != 0; }
  std::size_t num_rejections() const { return rejected_.size(); }
  const GammaSequence& gamma_sequence() const { return gamma_.sequence(); }

 protected:
  virtual StepOutcome advance(std::size_t t, double value, std::size_t deadline) = 0;
  void mark_rejected(std::size_t i);
  double gamma(std::size_t t) { return gamma_.weight(t); }
  double ell(std::size_t t) { return harmonic_.value(t); }

  double delta_;

 private:
  GammaCache gamma_;
  HarmonicSeries harmonic_;
  std::size_t t_ = 0;
  IndexSet rejected_;
  std::vector<char> flags_;
};

struct ProcedureOptions {
  double delta = 0.1;
  GammaSequence gamma = GammaSequence::default_rule();
  /// Seed for randomized procedures; required by them.
  std::optional<std::uint64_t> seed;
};

/// Names accepted by make_procedure.
std::vector<std::string> procedure_names();
/// Builds a procedure by registry name. Throws ConfigError for unknown names.
std::unique_ptr<OnlineProcedure> make_procedure(std::string_view name, const ProcedureOptions& opts);

}  // namespace ofdr
