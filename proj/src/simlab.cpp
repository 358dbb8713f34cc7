#include "ofdr/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <variant>

#include "ofdr/io.hpp"
#include "ofdr/procedure.hpp"

namespace ofdr {

void GaussianLocalConfig::validate() const {
  if (!(pi1 >= 0.0 && pi1 <= 1.0)) throw ConfigError("pi1 must lie in [0, 1]");
  if (!(rho > -1.0 && rho < 1.0)) throw ConfigError("rho must lie in (-1, 1)");
  if (!std::isfinite(mu1)) throw ConfigError("mu1 must be finite");
  validate_delta(delta);
}

void BoundedHoeffdingConfig::validate() const {
  if (!(pi1 >= 0.0 && pi1 <= 1.0)) throw ConfigError("pi1 must lie in [0, 1]");
  if (!(a_plus_b > 0.0)) throw ConfigError("a_plus_b must be positive");
  if (n_samples == 0) throw ConfigError("n_samples must be >= 1");
  if (!(lower < upper)) throw ConfigError("support must satisfy lower < upper");
  if (!(mu1 > lower && mu1 < upper)) throw ConfigError("mu1 must lie inside the support");
  validate_delta(delta);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Gamma(shape) for tiny shapes underflows; work with logs: G(a) = G(a + 1) U^{1/a}.
double log_gamma_draw(double shape, std::mt19937_64& rng) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return std::log(dist(rng));
  }
  std::gamma_distribution<double> dist(shape + 1.0, 1.0);
  double u = uniform01(rng);
  while (u <= 0.0) u = uniform01(rng);
  return std::log(dist(rng)) + std::log(u) / shape;
}

double beta_draw(double a, double b, std::mt19937_64& rng) {
  const double la = log_gamma_draw(a, rng);
  const double lb = log_gamma_draw(b, rng);
  // a-share = 1 / (1 + exp(lb - la)), computed without overflow.
  const double d = lb - la;
  if (d > 0) {
    const double w = std::exp(-d);
    return w / (1.0 + w);
  }
  return 1.0 / (1.0 + std::exp(d));
}

}  // namespace

SimStream gen_gaussian_local(const GaussianLocalConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SimStream s;
  s.e.resize(config.m);
  s.p.resize(config.m);
  s.is_null.resize(config.m);
  s.latent.resize(config.m);
  const double innov = std::sqrt(1.0 - config.rho * config.rho);
  double z = 0.0;
  for (std::size_t t = 0; t < config.m; ++t) {
    const double eps = normal(rng);
    if (t == 0 || config.lag == 0) {
      z = eps;
    } else {
      z = config.rho * z + innov * eps;
    }
    const bool non_null = uniform01(rng) < config.pi1;
    const double x = z + (non_null ? config.mu1 : 0.0);
    s.latent[t] = z;
    s.is_null[t] = non_null ? 0 : 1;
    s.e[t] = std::exp(config.mu1 * x - 0.5 * config.mu1 * config.mu1);
    s.p[t] = 0.5 * std::erfc(x / std::sqrt(2.0));
  }
  return s;
}

SimStream gen_bounded_hoeffding(const BoundedHoeffdingConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const double width = config.upper - config.lower;
  const double null_mean_share = -config.lower / width;  // share giving mean 0
  const double alt_share = (config.mu1 - config.lower) / width;
  SimStream s;
  s.e.resize(config.m);
  s.p.resize(config.m);
  s.is_null.resize(config.m);
  const double n = static_cast<double>(config.n_samples);
  for (std::size_t t = 0; t < config.m; ++t) {
    const bool non_null = uniform01(rng) < config.pi1;
    const double share = non_null ? alt_share : null_mean_share;
    const double a = config.a_plus_b * share;
    const double b = config.a_plus_b - a;
    const double dg = config.delta * config.gamma(t + 1);
    const double lambda =
        dg > 0.0 && dg < 1.0 ? std::sqrt(8.0 * std::log(1.0 / dg) / (width * width * n)) : 0.0;
    const double drift = lambda * lambda * width * width / 8.0;
    double log_m = 0.0;
    double log_max = 0.0;  // includes M^0 = 1
    for (std::size_t j = 0; j < config.n_samples; ++j) {
      const double y = config.fixed_increment
                           ? *config.fixed_increment
                           : config.lower + width * beta_draw(a, b, rng);
      log_m += lambda * y - drift;
      log_max = std::max(log_max, log_m);
    }
    s.is_null[t] = non_null ? 0 : 1;
    s.e[t] = std::exp(log_m);
    s.p[t] = std::min(1.0, std::exp(-log_max));
  }
  return s;
}

// ---------------------------------------------------------------------------

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double standard_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

TrialReport run_single(const std::string& procedure, const SimStream& stream,
                       const TrialOptions& options, std::uint64_t seed) {
  ProcedureOptions po;
  po.delta = options.delta;
  po.gamma = options.gamma;
  po.seed = seed;
  auto proc = make_procedure(procedure, po);
  const bool use_e = proc->kind() == EvidenceKind::e_value;
  const std::vector<double>& evidence = use_e ? stream.e : stream.p;
  const std::size_t m = evidence.size();

  TrialReport report;
  FdpTracker tracker;
  std::size_t non_nulls = 0;
  std::size_t hits = 0;
  for (char n : stream.is_null) non_nulls += n ? 0 : 1;
  if (options.keep_trajectories) report.fdp_trajectory.reserve(m);

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t t = 1; t <= m; ++t) {
    const std::size_t deadline =
        options.deadline_window == kNoDeadline ? kNoDeadline : t + options.deadline_window;
    const StepOutcome out = proc->step(evidence[t - 1], deadline);
    for (std::size_t i : out.newly_rejected) {
      const bool is_null = stream.is_null[i - 1] != 0;
      tracker.add_rejection(is_null);
      hits += is_null ? 0 : 1;
    }
    report.sup_fdp = std::max(report.sup_fdp, tracker.current());
    if (options.keep_trajectories) report.fdp_trajectory.push_back(tracker.current());
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.final_fdp = tracker.current();
  report.rejection_count = tracker.rejections();
  report.power = non_nulls == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(non_nulls);
  return report;
}

const ProcedureSummary& AggregateReport::at(const std::string& name) const {
  for (const auto& p : procedures) {
    if (p.procedure == name) return p;
  }
  throw std::out_of_range("no procedure '" + name + "' in report");
}

namespace {

SimStream generate(const GeneratorConfig& generator, std::uint64_t seed) {
  return std::visit(
      [seed](auto config) {
        config.seed = seed;
        if constexpr (std::is_same_v<decltype(config), GaussianLocalConfig>) {
          return gen_gaussian_local(config);
        } else {
          return gen_bounded_hoeffding(config);
        }
      },
      generator);
}

}  // namespace

AggregateReport run_trials(const std::vector<std::string>& procedures,
                           const GeneratorConfig& generator, std::size_t n_trials,
                           std::uint64_t seed, const TrialOptions& options) {
  if (n_trials == 0) throw ConfigError("n_trials must be >= 1");
  for (const auto& name : procedures) {
    ProcedureOptions po;
    po.delta = options.delta;
    po.gamma = options.gamma;
    po.seed = 0;
    (void)make_procedure(name, po);  // fail fast on unknown names
  }
  std::vector<std::vector<TrialReport>> results(n_trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_trials) return;
      try {
        const std::uint64_t trial_seed = derive_seed(seed, i);
        const SimStream stream = generate(generator, trial_seed);
        std::vector<TrialReport> row;
        row.reserve(procedures.size());
        for (std::size_t k = 0; k < procedures.size(); ++k) {
          row.push_back(run_single(procedures[k], stream, options, derive_seed(trial_seed, k)));
        }
        results[i] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, n_trials));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  AggregateReport report;
  report.n_trials = n_trials;
  for (std::size_t k = 0; k < procedures.size(); ++k) {
    ProcedureSummary s;
    s.procedure = procedures[k];
    std::vector<double> power, sup, rej, secs;
    for (std::size_t i = 0; i < n_trials; ++i) {
      const TrialReport& tr = results[i][k];
      power.push_back(tr.power);
      sup.push_back(tr.sup_fdp);
      rej.push_back(static_cast<double>(tr.rejection_count));
      secs.push_back(tr.wall_seconds);
      s.trials.push_back(tr);
    }
    s.mean_power = mean_of(power);
    s.se_power = standard_error(power);
    s.mean_sup_fdp = mean_of(sup);
    s.se_sup_fdp = standard_error(sup);
    s.mean_rejections = mean_of(rej);
    s.mean_seconds = mean_of(secs);
    report.procedures.push_back(std::move(s));
  }
  return report;
}

std::vector<BenchRow> bench(const std::vector<std::string>& procedures,
                            const std::vector<std::size_t>& m_grid, std::size_t n_trials,
                            std::uint64_t seed, double pi1, const TrialOptions& options) {
  if (n_trials == 0) throw ConfigError("n_trials must be >= 1");
  if (!std::is_sorted(m_grid.begin(), m_grid.end())) throw ConfigError("m grid must be ascending");
  std::vector<BenchRow> rows;
  for (std::size_t m : m_grid) {
    std::vector<std::vector<double>> times(procedures.size());
    for (std::size_t i = 0; i < n_trials; ++i) {
      GaussianLocalConfig cfg;
      cfg.m = m;
      cfg.pi1 = pi1;
      cfg.delta = options.delta;
      cfg.seed = derive_seed(seed, i);
      const SimStream stream = gen_gaussian_local(cfg);
      for (std::size_t k = 0; k < procedures.size(); ++k) {
        times[k].push_back(run_single(procedures[k], stream, options, derive_seed(cfg.seed, k))
                               .wall_seconds);
      }
    }
    for (std::size_t k = 0; k < procedures.size(); ++k) {
      rows.push_back({procedures[k], m, mean_of(times[k]), standard_error(times[k])});
    }
  }
  return rows;
}

void write_report_csv(std::ostream& out, const AggregateReport& report, const std::string& setting) {
  out << "procedure,setting,metric,mean,se\n";
  auto row = [&](const std::string& proc, const char* metric, double mean, double se) {
    out << proc << ',' << setting << ',' << metric << ',' << format_double(mean) << ','
        << format_double(se) << '\n';
  };
  for (const auto& p : report.procedures) {
    row(p.procedure, "power", p.mean_power, p.se_power);
    row(p.procedure, "sup_fdp", p.mean_sup_fdp, p.se_sup_fdp);
    std::vector<double> rej, secs;
    for (const auto& t : p.trials) {
      rej.push_back(static_cast<double>(t.rejection_count));
      secs.push_back(t.wall_seconds);
    }
    row(p.procedure, "rejections", mean_of(rej), standard_error(rej));
    row(p.procedure, "wall_seconds", mean_of(secs), standard_error(secs));
  }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "procedure,m,mean_seconds,se_seconds\n";
  for (const auto& r : rows) {
    out << r.procedure << ',' << r.m << ',' << format_double(r.mean_seconds) << ','
        << format_double(r.se_seconds) << '\n';
  }
}

}  // namespace ofdr
