#pragma once
// Synthetic streams, Monte Carlo trial runner and runtime benchmark.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "ofdr/core.hpp"

namespace ofdr {

/// Gaussian observations with autoregressive correlation rho^{|i-j|}.
struct GaussianLocalConfig {
  std::size_t m = 200;
  double pi1 = 0.3;
  double mu1 = 3.0;
  double rho = 0.5;
  /// 0 gives independent latents; any positive lag uses the exact AR(1) recursion.
  std::size_t lag = 100;
  double delta = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rescaled Beta observations tested with a Hoeffding martingale.
struct BoundedHoeffdingConfig {
  std::size_t m = 200;
  double pi1 = 0.3;
  /// Mean of the non-null observations, inside (lower, upper).
  double mu1 = 3.0;
  double a_plus_b = 1e-2;
  double lower = -4.0;
  double upper = 4.0;
  std::size_t n_samples = 100;
  double delta = 0.1;
  GammaSequence gamma = GammaSequence::default_rule();
  std::uint64_t seed = 0;
  /// When set, every observation is this value (used for degenerate checks).
  std::optional<double> fixed_increment;

  void validate() const;
};

/// One synthetic stream: e-values and p-values for the same hypotheses.
struct SimStream {
  std::vector<double> e;
  std::vector<double> p;
  std::vector<char> is_null;
  /// Latent Gaussians (Gaussian generator only).
  std::vector<double> latent;
};

SimStream gen_gaussian_local(const GaussianLocalConfig& config);
SimStream gen_bounded_hoeffding(const BoundedHoeffdingConfig& config);

/// Deterministic 64-bit mixer used to derive per-trial seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

using GeneratorConfig = std::variant<GaussianLocalConfig, BoundedHoeffdingConfig>;

struct TrialOptions {
  double delta = 0.1;
  GammaSequence gamma = GammaSequence::default_rule();
  /// Deadline offset for deadline-aware procedures: d_t = t + window.
  std::size_t deadline_window = 10;
  std::size_t threads = 1;
  bool keep_trajectories = false;
};

/// Metrics for one procedure on one stream.
struct TrialReport {
  double power = 0.0;
  double sup_fdp = 0.0;
  double final_fdp = 0.0;
  std::size_t rejection_count = 0;
  double wall_seconds = 0.0;
  std::vector<double> fdp_trajectory;
};

/// Runs `procedure` over a stream and measures it.
TrialReport run_single(const std::string& procedure, const SimStream& stream,
                       const TrialOptions& options, std::uint64_t seed);

struct ProcedureSummary {
  std::string procedure;
  double mean_power = 0.0;
  double se_power = 0.0;
  double mean_sup_fdp = 0.0;
  double se_sup_fdp = 0.0;
  double mean_rejections = 0.0;
  double mean_seconds = 0.0;
  /// Per-trial reports in trial order.
  std::vector<TrialReport> trials;
};

struct AggregateReport {
  std::size_t n_trials = 0;
  std::vector<ProcedureSummary> procedures;

  const ProcedureSummary& at(const std::string& name) const;
};

/// Runs n_trials independent streams; trial i uses derive_seed(seed, i).
AggregateReport run_trials(const std::vector<std::string>& procedures,
                           const GeneratorConfig& generator, std::size_t n_trials,
                           std::uint64_t seed, const TrialOptions& options = {});

/// Standard error of the mean of xs (0 for fewer than two values).
double standard_error(const std::vector<double>& xs);
double mean_of(const std::vector<double>& xs);

struct BenchRow {
  std::string procedure;
  std::size_t m = 0;
  double mean_seconds = 0.0;
  double se_seconds = 0.0;
};

/// Single-threaded wall-clock timing on Gaussian streams with the given pi1.
std::vector<BenchRow> bench(const std::vector<std::string>& procedures,
                            const std::vector<std::size_t>& m_grid, std::size_t n_trials,
                            std::uint64_t seed, double pi1 = 0.3, const TrialOptions& options = {});

void write_report_csv(std::ostream& out, const AggregateReport& report, const std::string& setting);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace ofdr
