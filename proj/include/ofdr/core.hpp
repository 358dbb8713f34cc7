#pragma once
// Shared domain types for online FDR procedures: weight sequences, harmonic
// numbers, observations, test levels and FDP metrics.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ofdr {

// ---------------------------------------------------------------------------
// Errors

/// Argument outside the mathematical domain of an operation (t = 0, p > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid procedure configuration (delta outside (0,1], missing RNG seed, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed stream input (deadline in the past, non-contiguous indices, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request exceeds what an exhaustive routine is allowed to enumerate.
class CapabilityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// ---------------------------------------------------------------------------
// Test levels

/// A level of +inf means "reject unconditionally" for e-values.
inline constexpr double kInfiniteLevel = std::numeric_limits<double>::infinity();

/// Deadline value used for hypotheses that never expire.
inline constexpr std::size_t kNoDeadline = std::numeric_limits<std::size_t>::max();

struct LevelDecision {
  double alpha = 0.0;
  bool reject = false;
};

/// E-value rejection rule E >= 1/alpha, exact comparison. alpha = +inf accepts any e >= 0.
inline bool rejects_e(double e, double alpha) { return e >= 1.0 / alpha; }

/// P-value rejection rule P <= alpha.
inline bool rejects_p(double p, double alpha) { return p <= alpha; }

void validate_delta(double delta);
void validate_e_value(double e);
void validate_p_value(double p);

// ---------------------------------------------------------------------------
// Weight sequences

/// Nonnegative weights gamma_t, t >= 1, represented by a generating rule.
/// Copies share the rule; the sequence itself is immutable.
class GammaSequence {
 public:
  using Rule = std::function<double(std::size_t)>;

  GammaSequence(std::string name, Rule rule);

  /// gamma_t = 1 / (t (t + 1)); the series sums to one.
  static GammaSequence default_rule();
  static GammaSequence constant(double value);
  /// gamma_t = c t^{-a} with c = (a - 1) / a, so the series sums to at most one. Requires a > 1.
  static GammaSequence power_law(double exponent);
  /// Explicit head values gamma_1..gamma_n, continuing with `tail` beyond n.
  static GammaSequence tabulated(std::vector<double> head, GammaSequence tail);
  /// Resolves "default", "constant:<c>", "power:<a>".
  static GammaSequence from_name(std::string_view spec);

  /// gamma_t. Throws DomainError for t = 0.
  double operator()(std::size_t t) const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::shared_ptr<const Rule> rule_;
};

/// Incrementally extended table of gamma_t and prefix sums for one stream.
/// Not thread-safe; each procedure owns one.
class GammaCache {
 public:
  explicit GammaCache(GammaSequence seq) : seq_(std::move(seq)) {}

  double weight(std::size_t t);
  /// sum_{i <= t} gamma_i; prefix(0) = 0.
  double prefix(std::size_t t);
  void reserve(std::size_t horizon);
  const GammaSequence& sequence() const { return seq_; }

 private:
  void extend(std::size_t t);

  GammaSequence seq_;
  std::vector<double> weights_;  // weights_[t-1] = gamma_t
  std::vector<double> prefix_{0.0};
};

double gamma_default(std::size_t t);

struct GammaReport {
  bool ok = true;
  std::size_t first_offending_index = 0;  // 0 when ok
  double prefix_sum = 0.0;  // at the offending index, or at the horizon when ok
  std::string reason;
};

/// Checks gamma_t >= 0 and the prefix sum up to `horizon` stays <= 1 + 1e-12.
GammaReport gamma_validate(const GammaSequence& seq, std::size_t horizon);

// ---------------------------------------------------------------------------
// Harmonic numbers

/// l_t = sum_{i <= t} 1/i, summed in increasing i. Throws DomainError for t = 0.
double harmonic(std::size_t t);

/// Running harmonic numbers; value(t) is bit-identical to harmonic(t).
class HarmonicSeries {
 public:
  double value(std::size_t t);

 private:
  std::vector<double> values_{0.0};
};

// ---------------------------------------------------------------------------
// Observations

enum class EvidenceKind { e_value, p_value };

std::string_view to_string(EvidenceKind kind);

struct Observation {
  std::size_t index = 0;
  EvidenceKind kind = EvidenceKind::e_value;
  double value = 0.0;
  std::optional<bool> is_null;
  std::optional<std::size_t> deadline;

  /// Throws InputError when the evidence or deadline violates its domain.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Error metrics

using IndexSet = std::vector<std::size_t>;

/// |S intersect R| / max(|R|, 1).
double fdp(std::span<const std::size_t> candidate_nulls, std::span<const std::size_t> rejections);

/// max_t fdp(nulls, R_t) over a nested trajectory; 0 for an empty trajectory.
double sup_fdp(std::span<const std::size_t> null_set, std::span<const IndexSet> trajectory);

/// Streaming FDP tracker for a growing rejection set.
class FdpTracker {
 public:
  void add_rejection(bool is_null) {
    ++rejections_;
    if (is_null) ++false_rejections_;
  }
  double current() const {
    return rejections_ == 0 ? 0.0
                            : static_cast<double>(false_rejections_) / static_cast<double>(rejections_);
  }
  std::size_t rejections() const { return rejections_; }
  std::size_t false_rejections() const { return false_rejections_; }

 private:
  std::size_t rejections_ = 0;
  std::size_t false_rejections_ = 0;
};

}  // namespace ofdr
