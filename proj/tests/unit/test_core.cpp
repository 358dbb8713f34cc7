#include <doctest.h>

#include <cmath>
#include <vector>

#include "ofdr/core.hpp"

using namespace ofdr;

TEST_CASE("default gamma values") {
  CHECK(gamma_default(1) == 0.5);
  CHECK(gamma_default(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_default(0), DomainError);
  const auto g = GammaSequence::default_rule();
  CHECK(g(3) == gamma_default(3));
}

TEST_CASE("default gamma telescopes") {
  GammaCache cache(GammaSequence::default_rule());
  const std::size_t n = 1000000;
  CHECK(std::abs(cache.prefix(n) - (1.0 - 1.0 / (n + 1.0))) < 1e-12);
  CHECK(cache.prefix(0) == 0.0);
  CHECK(cache.weight(7) == gamma_default(7));
}

TEST_CASE("gamma_validate") {
  CHECK(gamma_validate(GammaSequence::default_rule(), 1000).ok);

  const auto c = gamma_validate(GammaSequence::constant(0.3), 4);
  CHECK_FALSE(c.ok);
  CHECK(c.first_offending_index == 4);
  CHECK(c.prefix_sum == doctest::Approx(1.2));

  const auto neg = gamma_validate(GammaSequence::tabulated({-0.1}, GammaSequence::default_rule()), 5);
  CHECK_FALSE(neg.ok);
  CHECK(neg.first_offending_index == 1);
  CHECK_THROWS_AS(gamma_validate(GammaSequence::default_rule(), 0), DomainError);
}

TEST_CASE("gamma rules by name") {
  CHECK(GammaSequence::from_name("default")(4) == gamma_default(4));
  CHECK(GammaSequence::from_name("constant:0.25")(9) == 0.25);
  const auto p = GammaSequence::from_name("power:2");
  CHECK(p(1) == doctest::Approx(0.5));
  CHECK(gamma_validate(p, 5000).ok);
  CHECK_THROWS_AS(GammaSequence::from_name("power:1"), ConfigError);
  CHECK_THROWS_AS(GammaSequence::from_name("zipf"), ConfigError);
  CHECK_THROWS_AS(GammaSequence::from_name("constant:x"), ConfigError);
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(2) == 1.5);
  CHECK(harmonic(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic(0), DomainError);
  HarmonicSeries h;
  for (std::size_t t : {5u, 1u, 300u, 17u}) CHECK(h.value(t) == harmonic(t));
}

TEST_CASE("fdp") {
  const IndexSet s{1, 2};
  CHECK(fdp(s, IndexSet{2, 3}) == 0.5);
  CHECK(fdp(s, IndexSet{}) == 0.0);
  CHECK(fdp(IndexSet{}, IndexSet{4, 5}) == 0.0);
}

TEST_CASE("sup_fdp") {
  const std::vector<IndexSet> a{{1}, {1, 2}};
  CHECK(sup_fdp(IndexSet{1}, a) == 1.0);
  CHECK(sup_fdp(IndexSet{}, a) == 0.0);
  const std::vector<IndexSet> b{{}, {1}, {1, 2}, {1, 2, 3}};
  CHECK(sup_fdp(IndexSet{2}, b) == 0.5);
  CHECK(sup_fdp(IndexSet{2}, std::vector<IndexSet>{}) == 0.0);
}

TEST_CASE("fdp tracker") {
  FdpTracker f;
  CHECK(f.current() == 0.0);
  f.add_rejection(true);
  f.add_rejection(false);
  CHECK(f.current() == 0.5);
  CHECK(f.rejections() == 2);
}

TEST_CASE("observation validation") {
  Observation ok{1, EvidenceKind::e_value, 3.0, true, 4};
  CHECK_NOTHROW(ok.validate());
  Observation neg{2, EvidenceKind::e_value, -1.0, {}, {}};
  CHECK_THROWS_AS(neg.validate(), InputError);
  Observation bigp{1, EvidenceKind::p_value, 1.5, {}, {}};
  CHECK_THROWS_AS(bigp.validate(), InputError);
  Observation late{5, EvidenceKind::p_value, 0.5, {}, 3};
  CHECK_THROWS_AS(late.validate(), InputError);
  CHECK(to_string(EvidenceKind::p_value) == "p");
}

TEST_CASE("levels and validators") {
  CHECK(rejects_e(20.0, 0.05));
  CHECK_FALSE(rejects_e(19.0, 0.05));
  CHECK(rejects_e(0.0, kInfiniteLevel));
  CHECK(rejects_p(0.05, 0.05));
  CHECK_THROWS_AS(validate_delta(0.0), ConfigError);
  CHECK_THROWS_AS(validate_delta(1.5), ConfigError);
  CHECK_NOTHROW(validate_delta(1.0));
  CHECK_THROWS_AS(validate_e_value(std::nan("")), DomainError);
  CHECK_THROWS_AS(validate_p_value(-0.1), DomainError);
}
