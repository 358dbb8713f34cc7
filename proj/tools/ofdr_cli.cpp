// ofdr: run procedures on CSV streams, simulate, benchmark, verify.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "ofdr/core.hpp"
#include "ofdr/io.hpp"
#include "ofdr/procedure.hpp"
#include "ofdr/simlab.hpp"
#include "ofdr/verify.hpp"

namespace {

struct Args {
  std::string procedure = "elond";
  std::vector<std::string> procedures;
  double delta = 0.1;
  std::string gamma = "default";
  std::string gamma_tail = "default";
  std::string input;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::string evidence;
  std::string deadlines = "deadline";
  std::string windows;
  std::size_t trials = 200;
  std::vector<std::size_t> m_grid{750, 1500, 3000};
  // simulate
  std::string setting = "gaussian";
  std::size_t m = 200;
  double pi1 = 0.3;
  double mu1 = 3.0;
  double rho = 0.5;
  std::size_t lag = 100;
  std::size_t threads = 1;
  std::size_t deadline_window = 10;
  // verify
  std::size_t streams = 20;
  std::size_t max_t = 12;
};

// Output goes to --output when given, standard output otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ofdr::InputError("cannot open output file " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<std::string> proc_list(const Args& a) {
  if (!a.procedures.empty()) return a.procedures;
  return {"elond", "closed-elond", "donation-elond"};
}

int cmd_run(const Args& a) {
  ofdr::RunConfig cfg;
  cfg.procedure = a.procedure;
  cfg.delta = a.delta;
  cfg.gamma = a.gamma;
  cfg.gamma_tail = a.gamma_tail;
  cfg.deadline_column = a.deadlines;
  cfg.seed = a.seed;
  if (!a.evidence.empty()) {
    cfg.evidence = a.evidence == "e" ? ofdr::EvidenceKind::e_value : ofdr::EvidenceKind::p_value;
  }
  if (!a.windows.empty()) cfg.windows = ofdr::read_windows(a.windows);

  // Evidence kind defaults to what the procedure consumes.
  ofdr::ProcedureOptions probe{a.delta, ofdr::GammaSequence::default_rule(), a.seed.value_or(0)};
  const auto kind = cfg.evidence.value_or(ofdr::make_procedure(a.procedure, probe)->kind());
  const auto obs = ofdr::ingest_csv(a.input, kind, a.deadlines);
  Sink sink(a.output);
  const auto summary = ofdr::run_stream(cfg, obs, sink.get());
  std::cerr << "steps=" << summary.steps << " rejections=" << summary.rejections << '\n';
  return 0;
}

int cmd_simulate(const Args& a) {
  ofdr::TrialOptions opts;
  opts.delta = a.delta;
  opts.gamma = ofdr::resolve_gamma(a.gamma, a.gamma_tail);
  opts.threads = a.threads;
  opts.deadline_window = a.deadline_window;
  ofdr::GeneratorConfig gen;
  if (a.setting == "gaussian") {
    ofdr::GaussianLocalConfig g;
    g.m = a.m;
    g.pi1 = a.pi1;
    g.mu1 = a.mu1;
    g.rho = a.rho;
    g.lag = a.lag;
    g.delta = a.delta;
    gen = g;
  } else if (a.setting == "hoeffding") {
    ofdr::BoundedHoeffdingConfig g;
    g.m = a.m;
    g.pi1 = a.pi1;
    g.mu1 = a.mu1;
    g.delta = a.delta;
    g.gamma = opts.gamma;
    gen = g;
  } else {
    throw ofdr::ConfigError("unknown setting '" + a.setting + "' (gaussian|hoeffding)");
  }
  const auto report = ofdr::run_trials(proc_list(a), gen, a.trials, a.seed.value_or(1), opts);
  Sink sink(a.output);
  ofdr::write_report_csv(sink.get(), report, a.setting);
  return 0;
}

int cmd_bench(const Args& a) {
  ofdr::TrialOptions opts;
  opts.delta = a.delta;
  opts.gamma = ofdr::resolve_gamma(a.gamma, a.gamma_tail);
  opts.threads = 1;
  const auto rows = ofdr::bench(proc_list(a), a.m_grid, a.trials, a.seed.value_or(1), a.pi1, opts);
  Sink sink(a.output);
  ofdr::write_bench_csv(sink.get(), rows);
  return 0;
}

int cmd_verify(const Args& a) {
  ofdr::VerifyOptions opts;
  opts.streams = a.streams;
  opts.max_t = a.max_t;
  opts.seed = a.seed.value_or(1);
  opts.delta = a.delta;
  bool ok = true;
  Sink sink(a.output);
  for (const auto& c : ofdr::run_verification(opts)) {
    sink.get() << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.cases << " cases)";
    if (!c.detail.empty()) sink.get() << ": " << c.detail;
    sink.get() << '\n';
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online FDR procedures: run, simulate, bench, verify"};
  app.set_config("--config", "", "key=value file; flags given on the command line take precedence");
  app.require_subcommand(1, 1);
  Args a;

  app.add_option("--procedure", a.procedure, "Procedure for `run`")
      ->check(CLI::IsMember(ofdr::procedure_names()));
  app.add_option("--procedures", a.procedures, "Comma-separated procedures for simulate/bench")
      ->delimiter(',')
      ->check(CLI::IsMember(ofdr::procedure_names()));
  app.add_option("--delta", a.delta, "Target level in (0, 1]");
  app.add_option("--gamma", a.gamma, "Gamma rule (default, constant:c, power:a) or CSV of t,gamma");
  app.add_option("--gamma-tail", a.gamma_tail, "Rule used beyond the end of a gamma CSV");
  app.add_option("--input", a.input, "Stream CSV");
  app.add_option("--output", a.output, "Output CSV (standard output when omitted)");
  app.add_option("--seed", a.seed, "RNG seed");
  app.add_option("--evidence", a.evidence, "Evidence column to read: e or p")
      ->check(CLI::IsMember({"e", "p"}));
  app.add_option("--deadlines", a.deadlines, "Deadline column name");
  app.add_option("--windows", a.windows, "Anomaly windows CSV (start_index,end_index)");
  app.add_option("--trials", a.trials, "Trials per setting");
  app.add_option("--m-grid", a.m_grid, "Comma-separated stream lengths for bench")->delimiter(',');
  app.add_option("--setting", a.setting, "Simulation setting: gaussian or hoeffding");
  app.add_option("--m", a.m, "Stream length for simulate");
  app.add_option("--pi1", a.pi1, "Non-null fraction");
  app.add_option("--mu1", a.mu1, "Non-null mean");
  app.add_option("--rho", a.rho, "Gaussian correlation");
  app.add_option("--lag", a.lag, "Gaussian correlation lag (0 = independent)");
  app.add_option("--threads", a.threads, "Worker threads for simulate");
  app.add_option("--deadline-window", a.deadline_window, "d_t = t + window in simulations");
  app.add_option("--streams", a.streams, "Random streams per verify check");
  app.add_option("--max-t", a.max_t, "Horizon of the exhaustive closure checks");

  auto* run = app.add_subcommand("run", "Run one procedure over a CSV stream")->fallthrough();
  auto* sim = app.add_subcommand("simulate", "Monte Carlo power and sup-FDP")->fallthrough();
  auto* bench = app.add_subcommand("bench", "Single-threaded timing table")->fallthrough();
  auto* verify = app.add_subcommand("verify", "Cross-check fast paths against oracles")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ofdr::validate_delta(a.delta);
    if (run->parsed()) {
      if (a.input.empty()) throw ofdr::ConfigError("run needs --input");
      return cmd_run(a);
    }
    if (sim->parsed()) return cmd_simulate(a);
    if (bench->parsed()) return cmd_bench(a);
    if (verify->parsed()) return cmd_verify(a);
  } catch (const ofdr::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
