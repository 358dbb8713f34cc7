#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gen.hpp"
#include "ofdr/baselines.hpp"
#include "ofdr/calibration.hpp"
#include "ofdr/oracles.hpp"

using namespace ofdr;

namespace {
const GammaSequence kDefault = GammaSequence::default_rule();
}

TEST_CASE("e-LOND levels") {
  Elond a(kDefault, 0.1);
  auto out = a.step(25.0);
  CHECK(out.alpha == doctest::Approx(0.05));
  CHECK(out.decision);

  Elond b(kDefault, 0.1);
  out = b.step(19.0);
  CHECK(out.alpha == doctest::Approx(0.05));
  CHECK_FALSE(out.decision);

  CHECK(elond_level(0.1 * 0.1, 3) == doctest::Approx(0.03));
  CHECK(elond_level(0.01, 0) == elond_level(0.01, 1));
}

TEST_CASE("e-LOND on E = (25, 0, 0)") {
  // alpha_2 = delta gamma_2 (|R_1| v 1) with |R_1| = 1.
  Elond p(kDefault, 0.1);
  const auto o1 = p.step(25.0);
  const auto o2 = p.step(0.0);
  const auto o3 = p.step(0.0);
  CHECK(o1.decision);
  CHECK_FALSE(o2.decision);
  CHECK_FALSE(o3.decision);
  CHECK(o1.alpha == doctest::Approx(0.05));
  CHECK(o2.alpha == doctest::Approx(0.1 * gamma_default(2)));
  CHECK(o3.alpha == doctest::Approx(0.1 * gamma_default(3)));
}

TEST_CASE("r-LOND levels") {
  Rlond a(kDefault, 0.1);
  auto out = a.step(0.04);
  CHECK(out.alpha == doctest::Approx(0.05));
  CHECK(out.decision);
  out = a.step(0.9);
  CHECK(out.alpha == doctest::Approx(1.0 / 90.0));

  Rlond b(kDefault, 0.1);
  b.step(0.9);
  CHECK(b.step(0.9).alpha == doctest::Approx(1.0 / 90.0));
  CHECK(rlond_level(1.0, 50, 3, harmonic(3)) == 1.0);
}

TEST_CASE("online e-BH examples") {
  OnlineEbh zero(kDefault, 0.1);
  for (int i = 0; i < 5; ++i) zero.step(0.0);
  CHECK(zero.current_r() == 0);
  CHECK(zero.rejected().empty());

  OnlineEbh one(kDefault, 0.1);
  one.step(20.0);  // gamma_1 E_1 = 1/delta
  CHECK(one.current_r() == 1);
  CHECK(one.rejected() == IndexSet{1});

  const auto thirds = GammaSequence::constant(1.0 / 3.0);
  OnlineEbh three(thirds, 0.5);
  three.step(9.0);
  three.step(3.0);
  three.step(0.0);
  CHECK(three.current_r() == 2);
  CHECK(three.rejected().size() == 2);
  CHECK(std::isnan(OnlineEbh(kDefault, 0.1).step(1.0).alpha));
}

TEST_CASE("e-TOAD examples") {
  Etoad single(kDefault, 0.1);
  CHECK(single.step(20.0, 3).decision);
  single.step(0.0, 5);
  single.step(0.0, 6);
  single.step(0.0, 7);
  CHECK(single.is_rejected(1));
  CHECK(single.rejected() == IndexSet{1});

  Etoad bad(kDefault, 0.1);
  bad.step(1.0, 4);
  CHECK_THROWS_AS(bad.step(1.0, 1), InputError);
}

TEST_CASE("e-TOAD reductions on random streams") {
  gen::Rng rng(21);
  for (int s = 0; s < 100; ++s) {
    const auto es = gen::e_stream(rng, 120);
    Etoad tight(kDefault, 0.1), loose(kDefault, 0.1);
    Elond el(kDefault, 0.1);
    OnlineEbh eb(kDefault, 0.1);
    for (std::size_t t = 1; t <= es.size(); ++t) {
      const auto a = tight.step(es[t - 1], t);
      const auto b = el.step(es[t - 1]);
      REQUIRE(a.decision == b.decision);
      loose.step(es[t - 1]);
      eb.step(es[t - 1]);
      REQUIRE(loose.rejected().size() == eb.rejected().size());
    }
    auto x = loose.rejected(), y = eb.rejected();
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    CHECK(x == y);
  }
}

TEST_CASE("online e-BH is nested and matches the predicate scan") {
  gen::Rng rng(22);
  for (int s = 0; s < 100; ++s) {
    const auto es = gen::e_stream(rng, 60, 0.6);
    OnlineEbh p(kDefault, 0.1);
    std::vector<ScanItem> items;
    std::size_t prev = 0;
    for (std::size_t t = 1; t <= es.size(); ++t) {
      p.step(es[t - 1]);
      items.push_back({gamma_default(t), es[t - 1], true, false});
      REQUIRE(p.current_r() >= prev);
      prev = p.current_r();
      REQUIRE(p.current_r() == brute_r_scan(items, 0.1, ScanMode::ebh));
    }
  }
}

TEST_CASE("online e-BH rejected items each pass at r_t") {
  gen::Rng rng(23);
  for (int s = 0; s < 50; ++s) {
    const auto es = gen::e_stream(rng, 200, 0.5);
    OnlineEbh p(kDefault, 0.1);
    for (double e : es) p.step(e);
    std::vector<double> gammas;
    for (std::size_t t = 1; t <= es.size(); ++t) gammas.push_back(gamma_default(t));
    CHECK(self_consistency_check(p.rejected(), gammas, es, 0.1));
    CHECK(p.rejected().size() == p.current_r());
  }
}

TEST_CASE("min_passing_rank agrees with passes_at") {
  gen::Rng rng(24);
  for (int i = 0; i < 5000; ++i) {
    const double e = std::exp(rng.uniform(-5.0, 25.0));
    const double dg = std::exp(rng.uniform(-20.0, 0.0));
    const std::size_t r = min_passing_rank(e, dg);
    if (r == kNeverRank) {
      CHECK_FALSE(passes_at(e, dg, 1000000000000000ULL));
      continue;
    }
    CHECK(passes_at(e, dg, r));
    if (r > 1) CHECK_FALSE(passes_at(e, dg, r - 1));
  }
  CHECK(min_passing_rank(0.0, 0.1) == kNeverRank);
}

TEST_CASE("offline e-BH") {
  const std::vector<double> a{10.0, 0.0};
  CHECK(ebh_offline(a, 0.5) == IndexSet{1});
  const std::vector<double> z(7, 0.0);
  CHECK(ebh_offline(z, 0.1).empty());
  const std::vector<double> all(6, 6.0 / 0.1);
  CHECK(ebh_offline(all, 0.1).size() == 6);
  CHECK_THROWS(ebh_offline(std::vector<double>{}, 0.1));
}

TEST_CASE("r-LOND equals e-LOND on calibrated p-values") {
  gen::Rng rng(25);
  for (int s = 0; s < 100; ++s) {
    const auto ps = gen::p_stream(rng, 150);
    Rlond a(kDefault, 0.1);
    Elond b(kDefault, 0.1);
    for (std::size_t t = 1; t <= ps.size(); ++t) {
      const bool da = a.step(ps[t - 1]).decision;
      const bool db = b.step(calibrate_p(ps[t - 1], t, gamma_default(t), 0.1)).decision;
      REQUIRE(da == db);
    }
  }
}

TEST_CASE("step validation") {
  Elond e(kDefault, 0.1);
  CHECK_THROWS_AS(e.step(-1.0), DomainError);
  Rlond r(kDefault, 0.1);
  CHECK_THROWS_AS(r.step(2.0), DomainError);
  CHECK_THROWS_AS(Elond(kDefault, 0.0), ConfigError);
}
