#include <doctest.h>

#include <cmath>

#include "ofdr/simlab.hpp"

using namespace ofdr;

namespace {

double mean(const std::vector<double>& v) { return mean_of(v); }

}  // namespace

TEST_CASE("gaussian null e-values average one") {
  GaussianLocalConfig c;
  c.m = 10000;
  c.pi1 = 0.0;
  c.mu1 = 1.0;
  c.lag = 0;
  c.seed = 3;
  const auto s = gen_gaussian_local(c);
  for (char n : s.is_null) REQUIRE(n == 1);
  CHECK(std::abs(mean(s.e) - 1.0) <= 3.0 * standard_error(s.e));
}

TEST_CASE("gaussian with mu1 = 0 gives unit e-values") {
  GaussianLocalConfig c;
  c.mu1 = 0.0;
  c.seed = 4;
  for (double e : gen_gaussian_local(c).e) CHECK(e == 1.0);
}

TEST_CASE("gaussian latent correlation") {
  GaussianLocalConfig c;
  c.m = 100000;
  c.seed = 5;
  const auto s = gen_gaussian_local(c);
  double sxy = 0.0, sxx = 0.0, syy = 0.0, mx = 0.0, my = 0.0;
  const std::size_t n = s.latent.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    mx += s.latent[i];
    my += s.latent[i + 1];
  }
  mx /= n;
  my /= n;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = s.latent[i] - mx, b = s.latent[i + 1] - my;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy) - 0.5) < 0.02);
}

TEST_CASE("gaussian config validation") {
  GaussianLocalConfig c;
  c.pi1 = 1.5;
  CHECK_THROWS_AS(gen_gaussian_local(c), ConfigError);
  c.pi1 = 0.3;
  c.rho = 1.0;
  CHECK_THROWS_AS(gen_gaussian_local(c), ConfigError);
}

TEST_CASE("hoeffding zero increments") {
  BoundedHoeffdingConfig c;
  c.m = 20;
  c.fixed_increment = 0.0;
  c.seed = 6;
  const auto s = gen_bounded_hoeffding(c);
  for (std::size_t t = 1; t <= s.e.size(); ++t) {
    const double dg = c.delta * c.gamma(t);
    const double lambda = std::sqrt(8.0 * std::log(1.0 / dg) / (64.0 * 100.0));
    CHECK(s.e[t - 1] == doctest::Approx(std::exp(-100.0 * lambda * lambda * 64.0 / 8.0)));
    CHECK(s.e[t - 1] < 1.0);
  }
}

TEST_CASE("hoeffding with lambda = 0") {
  BoundedHoeffdingConfig c;
  c.m = 5;
  c.delta = 1.0;
  c.gamma = GammaSequence::constant(1.0);
  c.seed = 7;
  const auto s = gen_bounded_hoeffding(c);
  for (std::size_t i = 0; i < s.e.size(); ++i) {
    CHECK(s.e[i] == 1.0);
    CHECK(s.p[i] == 1.0);
  }
}

TEST_CASE("hoeffding null e-values are at most one on average") {
  BoundedHoeffdingConfig c;
  c.m = 10000;
  c.pi1 = 0.0;
  c.n_samples = 20;
  c.gamma = GammaSequence::constant(1e-3);
  c.seed = 8;
  const auto s = gen_bounded_hoeffding(c);
  CHECK(mean(s.e) <= 1.0 + 3.0 * standard_error(s.e));
  for (double p : s.p) REQUIRE((p >= 0.0 && p <= 1.0));
}

TEST_CASE("generators are reproducible") {
  GaussianLocalConfig c;
  c.seed = 9;
  const auto a = gen_gaussian_local(c), b = gen_gaussian_local(c);
  CHECK(a.e == b.e);
  CHECK(a.is_null == b.is_null);
  BoundedHoeffdingConfig h;
  h.m = 50;
  h.seed = 9;
  CHECK(gen_bounded_hoeffding(h).e == gen_bounded_hoeffding(h).e);
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
}

TEST_CASE("single trial report equals run_single") {
  GaussianLocalConfig c;
  c.seed = 10;
  const auto report = run_trials({"elond", "donation-elond"}, c, 1, 77);
  REQUIRE(report.n_trials == 1);
  GaussianLocalConfig c0 = c;
  c0.seed = derive_seed(77, 0);
  const auto stream = gen_gaussian_local(c0);
  const auto& s = report.at("elond");
  CHECK(s.trials.size() == 1);
  CHECK(s.mean_power == s.trials[0].power);
  CHECK(s.mean_sup_fdp == s.trials[0].sup_fdp);
  CHECK(s.se_power == 0.0);
  CHECK_THROWS(report.at("nope"));
}

TEST_CASE("donation power dominates e-LOND per trial") {
  GaussianLocalConfig c;
  TrialOptions o;
  o.threads = 2;
  const auto report = run_trials({"elond", "donation-elond"}, c, 40, 5, o);
  const auto& a = report.at("elond").trials;
  const auto& b = report.at("donation-elond").trials;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].power >= a[i].power);
}

TEST_CASE("trials are reproducible across thread counts") {
  GaussianLocalConfig c;
  TrialOptions one, four;
  four.threads = 4;
  const auto a = run_trials({"closed-elond", "randomized-donation-elond"}, c, 12, 3, one);
  const auto b = run_trials({"closed-elond", "randomized-donation-elond"}, c, 12, 3, four);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(a.procedures[k].mean_power == b.procedures[k].mean_power);
    CHECK(a.procedures[k].mean_sup_fdp == b.procedures[k].mean_sup_fdp);
  }
}

TEST_CASE("metrics stay in range") {
  GaussianLocalConfig c;
  c.pi1 = 0.0;
  const auto r = run_trials({"elond", "online-ebh", "etoad"}, c, 10, 2);
  for (const auto& p : r.procedures) {
    CHECK(p.mean_power == 0.0);
    CHECK(p.mean_sup_fdp >= 0.0);
    CHECK(p.mean_sup_fdp <= 1.0);
  }
}

TEST_CASE("standard error") {
  CHECK(standard_error({1.0}) == 0.0);
  CHECK(standard_error({1.0, 3.0}) == doctest::Approx(1.0));
  CHECK(mean_of({}) == 0.0);
}
