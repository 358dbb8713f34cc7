#include "ofdr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace ofdr {

namespace {
constexpr double kRankCeiling = 1e15;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

std::size_t min_passing_rank(double e, double delta_gamma) {
  if (!(e > 0.0) || !(delta_gamma > 0.0)) return kNeverRank;
  const double guess = std::ceil(1.0 / (delta_gamma * e));
  if (!(guess < kRankCeiling)) return kNeverRank;
  std::size_t r = std::max<std::size_t>(1, static_cast<std::size_t>(guess));
  while (r > 1 && passes_at(e, delta_gamma, r - 1)) --r;
  while (!passes_at(e, delta_gamma, r)) ++r;
  return r;
}

double elond_level(double delta_gamma, std::size_t num_rejections) {
  return delta_gamma * static_cast<double>(std::max<std::size_t>(num_rejections, 1));
}

double rlond_level(double delta_gamma, std::size_t num_rejections, std::size_t t, double ell_t) {
  const std::size_t m = std::min(std::max<std::size_t>(num_rejections, 1), t);
  return std::min(1.0, delta_gamma * static_cast<double>(m) / ell_t);
}

StepOutcome Elond::advance(std::size_t t, double e, std::size_t) {
  StepOutcome out;
  out.alpha = elond_level(delta_ * gamma(t), num_rejections());
  out.decision = rejects_e(e, out.alpha);
  if (out.decision) {
    mark_rejected(t);
    out.newly_rejected.push_back(t);
  }
  return out;
}

StepOutcome Rlond::advance(std::size_t t, double p, std::size_t) {
  StepOutcome out;
  out.alpha = rlond_level(delta_ * gamma(t), num_rejections(), t, ell(t));
  out.decision = rejects_p(p, out.alpha);
  if (out.decision) {
    mark_rejected(t);
    out.newly_rejected.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------

void OnlineEbh::add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t from, long delta) {
  if (hi < from) return;
  if (from <= lo) {
    max_[node] += delta;
    lazy_[node] += delta;
    return;
  }
  const std::size_t mid = (lo + hi) / 2;
  add(2 * node, lo, mid, from, delta);
  add(2 * node + 1, mid + 1, hi, from, delta);
  max_[node] = lazy_[node] + std::max(max_[2 * node], max_[2 * node + 1]);
}

std::size_t OnlineEbh::rightmost_nonnegative(std::size_t node, std::size_t lo, std::size_t hi,
                                             std::size_t from, std::size_t to) {
  // Values below `node` are offset by the lazy tags of its ancestors; callers pass
  // through the tag by querying with the accumulated offset folded into max_.
  if (hi < from || lo > to || max_[node] < 0) return 0;
  if (lo == hi) return lo;
  const std::size_t mid = (lo + hi) / 2;
  // Push the pending tag so children hold absolute values.
  if (lazy_[node] != 0) {
    for (std::size_t c : {2 * node, 2 * node + 1}) {
      max_[c] += lazy_[node];
      lazy_[c] += lazy_[node];
    }
    lazy_[node] = 0;
  }
  const std::size_t right = rightmost_nonnegative(2 * node + 1, mid + 1, hi, from, to);
  if (right != 0) return right;
  return rightmost_nonnegative(2 * node, lo, mid, from, to);
}

void OnlineEbh::grow(std::size_t needed) {
  if (needed <= cap_) return;
  std::size_t cap = std::max<std::size_t>(cap_, 64);
  while (cap < needed) cap *= 2;
  cap_ = cap;
  max_.assign(4 * cap_, 0);
  lazy_.assign(4 * cap_, 0);
  // Leaf r starts at -r.
  std::function<void(std::size_t, std::size_t, std::size_t)> build = [&](std::size_t node,
                                                                          std::size_t lo,
                                                                          std::size_t hi) {
    if (lo == hi) {
      max_[node] = -static_cast<long>(lo);
      return;
    }
    const std::size_t mid = (lo + hi) / 2;
    build(2 * node, lo, mid);
    build(2 * node + 1, mid + 1, hi);
    max_[node] = std::max(max_[2 * node], max_[2 * node + 1]);
  };
  build(1, 1, cap_);
  for (std::size_t rank : ranks_) {
    if (rank <= cap_) add(1, 1, cap_, rank, 1);
  }
}

StepOutcome OnlineEbh::advance(std::size_t t, double e, std::size_t) {
  const std::size_t rank = min_passing_rank(e, delta_ * gamma(t));
  ranks_.push_back(rank);
  if (t > cap_) {
    grow(t);  // rebuild includes the new rank
  } else if (rank <= cap_) {
    add(1, 1, cap_, rank, 1);
  }
  StepOutcome out;
  out.alpha = kNaN;
  if (r_ < t) {
    const std::size_t found = rightmost_nonnegative(1, 1, cap_, r_ + 1, t);
    if (found != 0) r_ = found;
  }
  if (rank != kNeverRank) {
    pending_.emplace_back(rank, t);
    std::push_heap(pending_.begin(), pending_.end(), std::greater<>{});
  }
  while (!pending_.empty() && pending_.front().first <= r_) {
    std::pop_heap(pending_.begin(), pending_.end(), std::greater<>{});
    const std::size_t i = pending_.back().second;
    pending_.pop_back();
    mark_rejected(i);
    out.newly_rejected.push_back(i);
  }
  std::sort(out.newly_rejected.begin(), out.newly_rejected.end());
  out.decision = is_rejected(t);
  return out;
}

// ---------------------------------------------------------------------------

StepOutcome Etoad::advance(std::size_t t, double e, std::size_t deadline) {
  std::erase_if(active_, [t](const Active& a) { return a.deadline < t; });
  active_.push_back({t, min_passing_rank(e, delta_ * gamma(t)), deadline});

  std::size_t active_rejected = 0;
  for (const auto& a : active_) active_rejected += is_rejected(a.index) ? 1 : 0;
  const std::size_t b = num_rejections() - active_rejected;
  const std::size_t m = active_.size();
  const std::size_t hi = std::max(b, m);

  // hist[r] = #{active: rank == r} for r <= hi.
  std::vector<std::size_t> hist(hi + 2, 0);
  for (const auto& a : active_) hist[std::min(a.rank, hi + 1)]++;
  std::size_t count = std::accumulate(hist.begin(), hist.begin() + static_cast<long>(hi) + 1,
                                      std::size_t{0});
  std::size_t r = b;
  for (std::size_t cand = hi; cand > b; --cand) {
    if (count >= cand - b) {
      r = cand;
      break;
    }
    count -= hist[cand];
  }
  r_ = r;

  StepOutcome out;
  out.alpha = kNaN;
  for (const auto& a : active_) {
    if (a.rank <= r && !is_rejected(a.index)) {
      mark_rejected(a.index);
      out.newly_rejected.push_back(a.index);
    }
  }
  out.decision = is_rejected(t);
  return out;
}

// ---------------------------------------------------------------------------

IndexSet ebh_offline(std::span<const double> e_values, double delta) {
  validate_delta(delta);
  const std::size_t m = e_values.size();
  if (m == 0) throw DomainError("e-BH needs at least one e-value");
  for (double e : e_values) validate_e_value(e);
  std::vector<double> sorted(e_values.begin(), e_values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>{});
  const double md = static_cast<double>(m);
  std::size_t r = 0;
  for (std::size_t cand = m; cand >= 1; --cand) {
    if (sorted[cand - 1] >= md / (delta * static_cast<double>(cand))) {
      r = cand;
      break;
    }
  }
  IndexSet out;
  if (r == 0) return out;
  const double tau = md / (delta * static_cast<double>(r));
  for (std::size_t i = 0; i < m; ++i) {
    if (e_values[i] >= tau) out.push_back(i + 1);
  }
  return out;
}

}  // namespace ofdr
