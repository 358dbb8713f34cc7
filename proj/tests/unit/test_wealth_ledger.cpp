#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gen.hpp"
#include "ofdr/oracles.hpp"
#include "ofdr/wealth_ledger.hpp"

using namespace ofdr;

namespace {

double brute_wealth(const std::vector<std::pair<double, double>>& rejected, double mass, double c) {
  double w = mass;
  for (auto [g, e] : rejected) w += std::min(g * e - c, g);
  return w;
}

bool rel_eq(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

TEST_CASE("empty ledger") {
  WealthLedger l;
  CHECK(l.size() == 0);
  CHECK(l.wealth(10.0) == 0.0);
  l.add_unrejected(1, 0.6, 0.5);
  CHECK(l.wealth(3.0) == doctest::Approx(0.3));
  CHECK(l.unrejected_mass() == doctest::Approx(0.3));
}

TEST_CASE("single rejected node") {
  WealthLedger l;
  l.insert(1, 0.5, 20.0);
  CHECK(l.size() == 1);
  CHECK(l.contains(1));
  const double c = 1.0 / (0.1 * 2.0);
  CHECK(l.wealth(c) == doctest::Approx(0.5));
  l.add_unrejected(2, 0.2, 3.0);
  CHECK(l.wealth(c) == doctest::Approx(0.7));
  CHECK(l.check_invariants());
}

TEST_CASE("equal keys are kept apart by index") {
  WealthLedger l;
  l.insert(3, 0.25, 5.0);
  l.insert(7, 0.25, 5.0);
  CHECK(l.size() == 2);
  CHECK(l.contains(3));
  CHECK(l.contains(7));
  CHECK(l.wealth(0.5) == doctest::Approx(2.0 * std::min(1.25 - 0.5, 0.25)));
  CHECK_THROWS_AS(l.insert(3, 0.1, 1.0), std::logic_error);
}

TEST_CASE("revocable unrejected contributions") {
  WealthLedger l;
  l.add_unrejected(4, 0.5, 0.8, true);
  CHECK(l.unrejected_mass() == doctest::Approx(0.4));
  l.insert(4, 0.5, 0.8);
  CHECK(l.unrejected_mass() == doctest::Approx(0.0));
  CHECK(l.size() == 1);
}

TEST_CASE("random inserts agree with brute force") {
  gen::Rng rng(41);
  for (int s = 0; s < 10; ++s) {
    WealthLedger l;
    std::vector<std::pair<double, double>> rejected;
    double mass = 0.0;
    for (std::size_t i = 1; i <= 1000; ++i) {
      const double g = rng.uniform(1e-6, 1e-2);
      const double e = rng.coin(0.1) ? 0.0 : std::exp(rng.uniform(-3.0, 8.0));
      if (rng.coin(0.6)) {
        l.insert(i, g, e);
        rejected.emplace_back(g, e);
      } else {
        l.add_unrejected(i, g, e);
        mass += g * std::min(e, 1.0);
      }
      if (i % 37 == 0) {
        const double c = std::exp(rng.uniform(-5.0, 5.0));
        REQUIRE(rel_eq(l.wealth(c), brute_wealth(rejected, mass, c)));
      }
    }
    CHECK(l.check_invariants());
    for (int q = 0; q < 200; ++q) {
      const double c = std::exp(rng.uniform(-8.0, 8.0));
      CHECK(rel_eq(l.wealth(c), brute_wealth(rejected, mass, c)));
    }
  }
}

TEST_CASE("operations visit a logarithmic number of nodes") {
  gen::Rng rng(42);
  WealthLedger l;
  for (std::size_t i = 1; i <= 20000; ++i) {
    // Adversarial order: increasing keys.
    l.insert(i, 1e-5, static_cast<double>(i));
    const double bound = 3.0 * std::log2(static_cast<double>(l.size()) + 1.0) + 1.0;
    REQUIRE(static_cast<double>(l.last_visits()) <= bound);
    l.wealth(rng.uniform(0.0, 0.2));
    REQUIRE(static_cast<double>(l.last_visits()) <= bound);
  }
  CHECK(static_cast<double>(l.height()) <= 1.45 * std::log2(20001.0) + 1.0);
}

TEST_CASE("naive wealth examples") {
  CHECK(naive_wealth({}, {}, {}, 0.1) == 0.0);
  const std::vector<double> g{0.5}, e{0.4};
  const std::vector<char> f{0};
  CHECK(naive_wealth(g, e, f, 0.1) == doctest::Approx(0.2));
}
