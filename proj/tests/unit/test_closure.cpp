#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gen.hpp"
#include "ofdr/baselines.hpp"
#include "ofdr/closure.hpp"
#include "ofdr/oracles.hpp"

using namespace ofdr;

namespace {

const GammaSequence kDefault = GammaSequence::default_rule();

EHistory history(std::vector<double> values, double delta = 0.1) {
  EHistory h;
  h.values = std::move(values);
  for (std::size_t t = 1; t <= h.values.size() + 1; ++t) h.gammas.push_back(gamma_default(t));
  h.delta = delta;
  return h;
}

bool rel_eq(double a, double b) {
  return a == b || std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

TEST_CASE("e-collection values") {
  const auto h = history({2.0, 3.0, 5.0});
  const std::vector<std::size_t> s23{2, 3};
  CHECK(ecollection_value(ECollectionKind::reset, s23, h) ==
        doctest::Approx(gamma_default(1) * 3.0 + gamma_default(2) * 5.0));
  const std::vector<std::size_t> s2{2};
  CHECK(ecollection_value(ECollectionKind::gap, s2, h) == doctest::Approx(2.0 / 3.0 * 3.0));
  const auto z = history({0.0});
  const std::vector<std::size_t> s1{1};
  CHECK(ecollection_value(ECollectionKind::reset, s1, z) == 0.0);
  CHECK(ecollection_value(ECollectionKind::gap, s1, z) == 0.0);
  const std::vector<std::size_t> bad{4};
  CHECK_THROWS_AS(ecollection_value(ECollectionKind::reset, bad, h), DomainError);
}

TEST_CASE("closure is strictly larger than weighted self-consistency") {
  const double delta = 0.5;
  const double e1 = 1.0 / (2.0 * delta), e2 = 3.0 / (2.0 * delta);
  // Per-set weights: gamma_1^{1} = 1/2, gamma^{1,2} = (1/2, 1/2), gamma_2^{2} = 1.
  const SubsetEValue e_of = [&](std::span<const std::size_t> S) {
    if (S.empty()) return 0.0;
    if (S.size() == 2) return 0.5 * e1 + 0.5 * e2;
    return S[0] == 1 ? 0.5 * e1 : e2;
  };
  const std::vector<std::size_t> r2{2};
  CHECK(closure_membership(r2, 2, e_of, delta));

  const std::vector<double> gammas{0.5, 0.5}, es{e1, e2};
  for (const IndexSet& R : {IndexSet{1}, IndexSet{2}, IndexSet{1, 2}}) {
    CHECK_FALSE(self_consistency_check(R, gammas, es, delta));
  }
  CHECK(self_consistency_check(IndexSet{}, gammas, es, delta));
  CHECK(closure_membership(std::vector<std::size_t>{}, 2, e_of, delta));
}

TEST_CASE("weighted self-consistent sets are in the closure") {
  gen::Rng rng(31);
  for (int s = 0; s < 200; ++s) {
    const std::size_t t = 1 + rng.below(8);
    std::vector<double> gammas(t), es(t);
    for (std::size_t i = 0; i < t; ++i) {
      gammas[i] = rng.uniform(0.01, 1.0 / static_cast<double>(t));
      es[i] = rng.coin(0.5) ? rng.uniform(0.0, 3.0) : rng.uniform(0.0, 400.0);
    }
    IndexSet R;
    for (std::size_t i = 1; i <= t; ++i)
      if (rng.coin(0.5)) R.push_back(i);
    if (!self_consistency_check(R, gammas, es, 0.2)) continue;
    const SubsetEValue e_of = [&](std::span<const std::size_t> S) {
      double v = 0.0;
      for (std::size_t i : S) v += gammas[i - 1] * es[i - 1];
      return v;
    };
    CHECK(closure_membership(R, t, e_of, 0.2));
  }
}

TEST_CASE("closure membership budget") {
  const SubsetEValue e_of = [](std::span<const std::size_t>) { return 0.0; };
  CHECK_THROWS_AS(closure_membership(std::vector<std::size_t>{}, 25, e_of, 0.1), CapabilityError);
}

TEST_CASE("C-eLOND witnesses") {
  ClosedElond p(kDefault, 0.1);
  const auto o1 = p.step(1.0 / (0.1 * gamma_default(1)));
  CHECK(o1.alpha == doctest::Approx(0.1 * gamma_default(1)));
  CHECK(o1.decision);
  const auto o2 = p.step(0.0);
  CHECK(o2.alpha == doctest::Approx(2.0 * 0.1 * gamma_default(1)));
  CHECK(o2.alpha > 0.1 * gamma_default(2));
}

TEST_CASE("alternative C-eLOND at t = 1") {
  ClosedElondAlt p(kDefault, 0.1);
  CHECK(p.step(3.0).alpha == doctest::Approx(0.1 * gamma_default(1)));
}

TEST_CASE("alternative C-eLOND strict improvement via the empty minimizer") {
  // With R_1 = {1} the only nontrivial constraint comes from S = {1} and E_1 is
  // huge, so S = {} binds: alpha_2 = delta (gamma_1 + gamma_2) (|R_1| + 1).
  ClosedElondAlt p(kDefault, 0.1);
  p.step(1e9);
  const auto o2 = p.step(0.0);
  CHECK(o2.alpha == doctest::Approx(0.1 * (gamma_default(1) + gamma_default(2)) * 2.0));
  CHECK(o2.alpha > 0.1 * gamma_default(2));
}

TEST_CASE("closed r-LOND witnesses") {
  ClosedRlond p(kDefault, 0.1);
  const auto o1 = p.step(0.01);
  CHECK(o1.alpha == doctest::Approx(0.1 * gamma_default(1)));
  CHECK(o1.decision);
  CHECK(p.step(0.5).alpha == doctest::Approx(0.1 * gamma_default(1)));
}

TEST_CASE("closed r-LOND restricted shortcut is not exact") {
  const std::vector<double> gammas{gamma_default(1), gamma_default(2)};
  const std::vector<double> values{0.9};
  const std::vector<char> flags{0};
  const LevelContext ctx{gammas, values, flags, 0, 0.1, {}};
  const double full = closed_rlond_level(ctx);
  const double restricted = closed_rlond_level(ctx, true);
  CHECK(full == doctest::Approx(0.1 * gamma_default(2) / harmonic(2)));
  CHECK(full == doctest::Approx(brute_closure_level(ECollectionKind::calibrated_reset, ctx)));
  CHECK(restricted == doctest::Approx(0.1 * gamma_default(1)));
  CHECK(restricted > full);
}

TEST_CASE("closed levels equal exhaustive minimization") {
  gen::Rng rng(32);
  for (int s = 0; s < 40; ++s) {
    const auto es = gen::e_stream(rng, 13, 0.6);
    const auto ps = gen::p_stream(rng, 13);
    ClosedElond a(kDefault, 0.1);
    ClosedElondAlt b(kDefault, 0.1);
    ClosedRlond c(kDefault, 0.1);
    ClosedRlond d(kDefault, 0.1, true);
    std::vector<double> gammas;
    std::vector<double> ha, hb, hc, hd;
    std::vector<char> fa, fb, fc, fd;
    for (std::size_t t = 1; t <= es.size(); ++t) {
      gammas.push_back(gamma_default(t));
      const LevelContext ca{gammas, ha, fa, a.num_rejections(), 0.1, {}};
      const LevelContext cb{gammas, hb, fb, b.num_rejections(), 0.1, {}};
      const LevelContext cc{gammas, hc, fc, c.num_rejections(), 0.1, {}};
      const LevelContext cd{gammas, hd, fd, d.num_rejections(), 0.1, {}};
      const double oa = brute_closure_level(ECollectionKind::reset, ca);
      const double ob = brute_closure_level(ECollectionKind::gap, cb);
      const double oc = brute_closure_level(ECollectionKind::calibrated_reset, cc);
      const double od = brute_closure_level(ECollectionKind::calibrated_reset, cd);
      const auto ra = a.step(es[t - 1]);
      const auto rb = b.step(es[t - 1]);
      const auto rc = c.step(ps[t - 1]);
      const auto rd = d.step(ps[t - 1]);
      REQUIRE(rel_eq(ra.alpha, oa));
      REQUIRE(rel_eq(rb.alpha, ob));
      REQUIRE(rel_eq(rc.alpha, oc));
      REQUIRE(rd.alpha >= od * (1.0 - 1e-12));
      ha.push_back(es[t - 1]);
      hb.push_back(es[t - 1]);
      hc.push_back(ps[t - 1]);
      hd.push_back(ps[t - 1]);
      fa.push_back(ra.decision);
      fb.push_back(rb.decision);
      fc.push_back(rc.decision);
      fd.push_back(rd.decision);
    }
  }
}

TEST_CASE("C-eLOND rejection sets lie in the closure") {
  gen::Rng rng(33);
  for (int s = 0; s < 60; ++s) {
    const auto es = gen::e_stream(rng, 9, 0.6);
    ClosedElond p(kDefault, 0.1);
    const auto h = history(es);
    for (std::size_t t = 1; t <= es.size(); ++t) {
      p.step(es[t - 1]);
      auto R = p.rejected();
      std::sort(R.begin(), R.end());
      REQUIRE(closure_membership(R, t, ECollectionKind::reset, h));
    }
  }
}

TEST_CASE("closed procedures dominate their baselines") {
  gen::Rng rng(34);
  for (int s = 0; s < 100; ++s) {
    const auto gamma = gen::decreasing_gamma(rng, 60);
    const auto es = gen::e_stream(rng, 60, 0.5);
    const auto ps = gen::p_stream(rng, 60);
    ClosedElond ce(gamma, 0.1);
    Elond el(gamma, 0.1);
    ClosedRlond cr(kDefault, 0.1);
    Rlond rl(kDefault, 0.1);
    for (std::size_t t = 1; t <= es.size(); ++t) {
      const auto a = ce.step(es[t - 1]);
      const auto b = el.step(es[t - 1]);
      REQUIRE(a.alpha >= b.alpha * (1.0 - 1e-12));
      REQUIRE((a.decision || !b.decision));
      const auto c = cr.step(ps[t - 1]);
      const auto d = rl.step(ps[t - 1]);
      REQUIRE(c.alpha >= d.alpha * (1.0 - 1e-12));
      REQUIRE((c.decision || !d.decision));
    }
  }
}

TEST_CASE("snapped floor") {
  CHECK(snapped_floor(2.0) == 2.0);
  CHECK(snapped_floor(3.0 - 1e-13) == 3.0);
  CHECK(snapped_floor(2.5) == 2.0);
  CHECK(snapped_floor(0.0) == 0.0);
}
