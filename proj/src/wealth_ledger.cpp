#include "ofdr/wealth_ledger.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace ofdr {

bool WealthLedger::less(const Node& a, double key, std::size_t index) {
  return a.key < key || (a.key == key && a.index < index);
}

void WealthLedger::pull(std::int32_t n) {
  Node& x = nodes_[n];
  x.sum_ge = x.ge;
  x.sum_g = x.g;
  x.count = 1;
  if (x.left >= 0) {
    const Node& l = nodes_[x.left];
    x.sum_ge += l.sum_ge;
    x.sum_g += l.sum_g;
    x.count += l.count;
  }
  if (x.right >= 0) {
    const Node& r = nodes_[x.right];
    x.sum_ge += r.sum_ge;
    x.sum_g += r.sum_g;
    x.count += r.count;
  }
  x.height = 1 + std::max(h(x.left), h(x.right));
}

std::int32_t WealthLedger::rotate_left(std::int32_t n) {
  const std::int32_t r = nodes_[n].right;
  nodes_[n].right = nodes_[r].left;
  nodes_[r].left = n;
  pull(n);
  pull(r);
  return r;
}

std::int32_t WealthLedger::rotate_right(std::int32_t n) {
  const std::int32_t l = nodes_[n].left;
  nodes_[n].left = nodes_[l].right;
  nodes_[l].right = n;
  pull(n);
  pull(l);
  return l;
}

std::int32_t WealthLedger::balance(std::int32_t n) {
  pull(n);
  const int bf = h(nodes_[n].left) - h(nodes_[n].right);
  if (bf > 1) {
    const std::int32_t l = nodes_[n].left;
    if (h(nodes_[l].left) < h(nodes_[l].right)) nodes_[n].left = rotate_left(l);
    return rotate_right(n);
  }
  if (bf < -1) {
    const std::int32_t r = nodes_[n].right;
    if (h(nodes_[r].right) < h(nodes_[r].left)) nodes_[n].right = rotate_right(r);
    return rotate_left(n);
  }
  return n;
}

std::int32_t WealthLedger::insert_at(std::int32_t n, std::int32_t fresh) {
  if (n < 0) return fresh;
  ++visits_;
  const Node& f = nodes_[fresh];
  if (less(nodes_[n], f.key, f.index)) {
    const std::int32_t child = insert_at(nodes_[n].right, fresh);
    nodes_[n].right = child;
  } else {
    const std::int32_t child = insert_at(nodes_[n].left, fresh);
    nodes_[n].left = child;
  }
  return balance(n);
}

void WealthLedger::insert(std::size_t index, double gamma, double e) {
  if (members_.count(index)) {
    throw std::logic_error("wealth ledger already holds index " + std::to_string(index));
  }
  if (auto it = unrejected_.find(index); it != unrejected_.end()) {
    mass_ -= it->second;
    unrejected_.erase(it);
  }
  visits_ = 0;
  const double ge = gamma * e;
  nodes_.push_back(Node{gamma * (e - 1.0), index, ge, gamma, ge, gamma, 1, 1, -1, -1});
  const auto fresh = static_cast<std::int32_t>(nodes_.size() - 1);
  if (root_ < 0) ++visits_;
  root_ = insert_at(root_, fresh);
  members_.emplace(index, 1);
  ++live_;
}

void WealthLedger::add_unrejected(std::size_t index, double gamma, double e, bool revocable) {
  const double contribution = gamma * std::min(e, 1.0);
  mass_ += contribution;
  if (revocable) unrejected_[index] += contribution;
}

bool WealthLedger::contains(std::size_t index) const { return members_.count(index) != 0; }

double WealthLedger::wealth(double threshold) const {
  visits_ = 0;
  double sum_ge = 0.0;
  double sum_g_low = 0.0;
  std::size_t count_low = 0;
  std::int32_t n = root_;
  while (n >= 0) {
    ++visits_;
    const Node& x = nodes_[n];
    if (x.key <= threshold) {
      if (x.left >= 0) {
        sum_ge += nodes_[x.left].sum_ge;
        sum_g_low += nodes_[x.left].sum_g;
        count_low += nodes_[x.left].count;
      }
      sum_ge += x.ge;
      sum_g_low += x.g;
      ++count_low;
      n = x.right;
    } else {
      n = x.left;
    }
  }
  const double total_g = root_ >= 0 ? nodes_[root_].sum_g : 0.0;
  const double low = count_low == 0 ? 0.0 : sum_ge - threshold * static_cast<double>(count_low);
  return low + (total_g - sum_g_low) + mass_;
}

std::size_t WealthLedger::height() const { return static_cast<std::size_t>(h(root_)); }

bool WealthLedger::check_invariants() const {
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
  };
  bool ok = true;
  std::function<void(std::int32_t, double&, double&, std::size_t&, int&)> walk =
      [&](std::int32_t n, double& ge, double& g, std::size_t& c, int& ht) {
        ge = 0.0;
        g = 0.0;
        c = 0;
        ht = 0;
        if (n < 0) return;
        const Node& x = nodes_[n];
        double lge, lg, rge, rg;
        std::size_t lc, rc;
        int lh, rh;
        walk(x.left, lge, lg, lc, lh);
        walk(x.right, rge, rg, rc, rh);
        if (x.left >= 0 && !less(nodes_[x.left], x.key, x.index)) ok = false;
        if (x.right >= 0 && less(nodes_[x.right], x.key, x.index)) ok = false;
        ge = lge + rge + x.ge;
        g = lg + rg + x.g;
        c = lc + rc + 1;
        ht = 1 + std::max(lh, rh);
        if (!close(ge, x.sum_ge) || !close(g, x.sum_g) || c != x.count || ht != x.height) ok = false;
        if (std::abs(lh - rh) > 1) ok = false;
      };
  double ge, g;
  std::size_t c;
  int ht;
  walk(root_, ge, g, c, ht);
  return ok && c == live_ && mass_ >= -1e-12;
}

}  // namespace ofdr
