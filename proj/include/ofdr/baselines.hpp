#pragma once
// Baseline procedures: e-LOND, r-LOND, online e-BH, e-TOAD and offline e-BH.

#include <cstddef>
#include <span>
#include <vector>

#include "ofdr/core.hpp"
#include "ofdr/procedure.hpp"

namespace ofdr {

/// Rank sentinel for evidence that never passes.
inline constexpr std::size_t kNeverRank = std::numeric_limits<std::size_t>::max();

/// Per-hypothesis pass test for the e-BH family: e >= 1 / ((delta gamma) r).
inline bool passes_at(double e, double delta_gamma, std::size_t r) {
  return e >= 1.0 / (delta_gamma * static_cast<double>(r));
}

/// Smallest r >= 1 with passes_at(e, delta_gamma, r), or kNeverRank.
std::size_t min_passing_rank(double e, double delta_gamma);

/// delta gamma_t (r v 1).
double elond_level(double delta_gamma, std::size_t num_rejections);
/// min(1, delta gamma_t (min(r v 1, t)) / l_t).
double rlond_level(double delta_gamma, std::size_t num_rejections, std::size_t t, double ell_t);

class Elond : public OnlineProcedure {
 public:
  using OnlineProcedure::OnlineProcedure;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "elond"; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;
};

class Rlond : public OnlineProcedure {
 public:
  using OnlineProcedure::OnlineProcedure;
  EvidenceKind kind() const override { return EvidenceKind::p_value; }
  std::string name() const override { return "rlond"; }

 protected:
  StepOutcome advance(std::size_t t, double p, std::size_t deadline) override;
};

/// Online e-BH. r_t is nondecreasing, so the search runs over (r_{t-1}, t] using a
/// segment tree over f(r) = #{i: rank_i <= r} - r; O(log t) amortized per step.
class OnlineEbh : public OnlineProcedure {
 public:
  using OnlineProcedure::OnlineProcedure;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "online-ebh"; }
  std::size_t current_r() const { return r_; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;

 private:
  void grow(std::size_t needed);
  void add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t from, long delta);
  std::size_t rightmost_nonnegative(std::size_t node, std::size_t lo, std::size_t hi,
                                    std::size_t from, std::size_t to);

  std::size_t cap_ = 0;
  std::vector<long> max_;
  std::vector<long> lazy_;
  std::vector<std::size_t> ranks_;                       // ranks_[i-1]
  std::vector<std::pair<std::size_t, std::size_t>> pending_;  // min-heap of (rank, index)
  std::size_t r_ = 0;
};

/// e-TOAD with active set A_t = {i <= t : d_i >= t}. The candidate range for r is
/// {b, ..., max(b, m_t)} with b = |R_{t-1} \ A_t|.
class Etoad : public OnlineProcedure {
 public:
  using OnlineProcedure::OnlineProcedure;
  EvidenceKind kind() const override { return EvidenceKind::e_value; }
  std::string name() const override { return "etoad"; }
  std::size_t current_r() const { return r_; }

 protected:
  StepOutcome advance(std::size_t t, double e, std::size_t deadline) override;

 private:
  struct Active {
    std::size_t index;
    std::size_t rank;
    std::size_t deadline;
  };
  std::vector<Active> active_;
  std::size_t r_ = 0;
};

/// Offline e-BH at level delta; returns rejected 1-based indices in ascending order.
IndexSet ebh_offline(std::span<const double> e_values, double delta);

}  // namespace ofdr
