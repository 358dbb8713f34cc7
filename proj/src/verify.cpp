#include "ofdr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ofdr/baselines.hpp"
#include "ofdr/calibration.hpp"
#include "ofdr/closure.hpp"
#include "ofdr/donation.hpp"
#include "ofdr/oracles.hpp"

namespace ofdr {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

std::vector<double> mixed_e_values(std::mt19937_64& rng, std::size_t n, double pi1) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& e : out) {
    const double mu = 1.0 + 3.0 * unit(rng);
    const bool non_null = unit(rng) < pi1;
    const double x = normal(rng) + (non_null ? mu : 0.0);
    e = unit(rng) < 0.1 ? 0.0 : std::exp(mu * x - 0.5 * mu * mu);
  }
  return out;
}

std::vector<double> mixed_p_values(std::mt19937_64& rng, std::size_t n, double pi1) {
  std::vector<double> out(n);
  for (auto& p : out) {
    const double u = unit(rng);
    p = unit(rng) < pi1 ? std::pow(u, 8.0) * 0.05 : u;
  }
  return out;
}

std::vector<VerifyCheck> run_verification(const VerifyOptions& options) {
  std::vector<VerifyCheck> checks;
  std::mt19937_64 rng(options.seed);
  const double delta = options.delta;
  const GammaSequence gamma = GammaSequence::default_rule();

  // Closed levels: DP against exhaustive minimization, along each procedure's own path.
  {
    struct Kind {
      const char* name;
      ECollectionKind kind;
    };
    for (const Kind k : {Kind{"closure dp vs brute: closed-elond", ECollectionKind::reset},
                         Kind{"closure dp vs brute: closed-elond-alt", ECollectionKind::gap},
                         Kind{"closure dp vs brute: closed-rlond", ECollectionKind::calibrated_reset}}) {
      VerifyCheck c;
      c.name = k.name;
      for (std::size_t s = 0; s < options.streams; ++s) {
        const bool pvals = k.kind == ECollectionKind::calibrated_reset;
        const auto values = pvals ? mixed_p_values(rng, options.max_t)
                                  : mixed_e_values(rng, options.max_t, 0.6);
        std::vector<double> gammas, hist;
        std::vector<char> flags;
        std::size_t r = 0;
        for (std::size_t t = 1; t <= options.max_t; ++t) {
          gammas.push_back(gamma(t));
          LevelContext ctx{gammas, hist, flags, r, delta, {}};
          double fast = 0.0;
          if (k.kind == ECollectionKind::reset) fast = closed_elond_level(ctx);
          if (k.kind == ECollectionKind::gap) fast = closed_elond_alt_level(ctx);
          if (pvals) fast = closed_rlond_level(ctx);
          const double slow = brute_closure_level(k.kind, ctx);
          ++c.cases;
          if (!close_rel(fast, slow, 1e-9)) {
            c.passed = false;
            std::ostringstream os;
            os << "stream " << s << " t=" << t << " dp=" << fast << " brute=" << slow;
            c.detail = os.str();
          }
          const double v = values[t - 1];
          const bool rej = pvals ? rejects_p(v, fast) : rejects_e(v, fast);
          hist.push_back(v);
          flags.push_back(rej ? 1 : 0);
          r += rej ? 1 : 0;
        }
      }
      checks.push_back(c);
    }
  }

  // Ledger wealth against direct summation along a donation e-LOND run.
  {
    VerifyCheck c;
      c.name = "ledger wealth vs naive";
    for (std::size_t s = 0; s < std::max<std::size_t>(1, options.streams / 4); ++s) {
      const auto values = mixed_e_values(rng, options.ledger_length);
      DonationElond proc(gamma, delta);
      std::vector<double> gammas, hist;
      std::vector<char> flags;
      for (std::size_t t = 1; t <= values.size(); ++t) {
        const StepOutcome out = proc.step(values[t - 1]);
        const double naive = naive_wealth(gammas, hist, flags, delta);
        ++c.cases;
        if (!close_rel(*out.wealth, naive, 1e-9)) {
          c.passed = false;
          std::ostringstream os;
          os << "stream " << s << " t=" << t << " ledger=" << *out.wealth << " naive=" << naive;
          c.detail = os.str();
        }
        gammas.push_back(gamma(t));
        hist.push_back(values[t - 1]);
        flags.push_back(out.decision ? 1 : 0);
      }
    }
    checks.push_back(c);
  }

  // One-shot r selection: fast machinery against predicate scans.
  {
    const std::pair<const char*, ScanMode> modes[] = {{"r scan: ebh", ScanMode::ebh},
                                                      {"r scan: donation-ebh", ScanMode::donation_ebh},
                                                      {"r scan: etoad", ScanMode::etoad},
                                                      {"r scan: donation-etoad", ScanMode::donation_etoad}};
    for (const auto& [name, mode] : modes) {
      VerifyCheck c;
      c.name = name;
      for (std::size_t s = 0; s < options.streams * 5; ++s) {
        const std::size_t n = 1 + rng() % 40;
        const auto es = mixed_e_values(rng, n, 0.5);
        std::vector<ScanItem> items(n);
        for (std::size_t i = 0; i < n; ++i) {
          items[i].gamma = 0.5 * unit(rng) / static_cast<double>(n) + 1e-3;
          items[i].e = es[i] * (1.0 + 20.0 * unit(rng));
          items[i].active = unit(rng) < 0.6;
          items[i].rejected = !items[i].active && unit(rng) < 0.4;
        }
        const std::size_t fast = fast_r_scan(items, delta, mode);
        const std::size_t slow = brute_r_scan(items, delta, mode);
        ++c.cases;
        if (fast != slow) {
          c.passed = false;
          c.detail = "instance " + std::to_string(s) + ": fast=" + std::to_string(fast) +
                     " brute=" + std::to_string(slow);
        }
      }
      checks.push_back(c);
    }
  }

  // r-LOND equals e-LOND on calibrated p-values.
  {
    VerifyCheck c;
      c.name = "calibration equivalence: rlond vs elond";
    for (std::size_t s = 0; s < options.streams; ++s) {
      const auto ps = mixed_p_values(rng, 200);
      Rlond a(gamma, delta);
      Elond b(gamma, delta);
      for (std::size_t t = 1; t <= ps.size(); ++t) {
        const bool da = a.step(ps[t - 1]).decision;
        const bool db = b.step(calibrate_p(ps[t - 1], t, gamma(t), delta)).decision;
        ++c.cases;
        if (da != db) {
          c.passed = false;
          c.detail = "stream " + std::to_string(s) + " t=" + std::to_string(t);
        }
      }
    }
    checks.push_back(c);
  }

  // e-TOAD reductions.
  {
    VerifyCheck c;
      c.name = "etoad reductions";
    for (std::size_t s = 0; s < options.streams; ++s) {
      const auto es = mixed_e_values(rng, 150, 0.5);
      Etoad tight(gamma, delta), loose(gamma, delta);
      Elond el(gamma, delta);
      OnlineEbh eb(gamma, delta);
      for (std::size_t t = 1; t <= es.size(); ++t) {
        const bool a = tight.step(es[t - 1], t).decision;
        const bool b = el.step(es[t - 1]).decision;
        loose.step(es[t - 1]);
        eb.step(es[t - 1]);
        ++c.cases;
        if (a != b || loose.rejected().size() != eb.rejected().size()) {
          c.passed = false;
          c.detail = "stream " + std::to_string(s) + " t=" + std::to_string(t);
        }
      }
    }
    checks.push_back(c);
  }
  return checks;
}

}  // namespace ofdr
