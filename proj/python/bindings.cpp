#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "ofdr/baselines.hpp"
#include "ofdr/calibration.hpp"
#include "ofdr/core.hpp"
#include "ofdr/donation.hpp"
#include "ofdr/io.hpp"
#include "ofdr/procedure.hpp"
#include "ofdr/simlab.hpp"
#include "ofdr/verify.hpp"

namespace py = pybind11;
using namespace ofdr;

namespace {

std::size_t to_deadline(std::optional<std::size_t> d) { return d ? *d : kNoDeadline; }

py::dict stream_dict(const SimStream& s) {
  py::dict d;
  d["e"] = s.e;
  d["p"] = s.p;
  std::vector<bool> nulls(s.is_null.begin(), s.is_null.end());
  d["is_null"] = nulls;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ofdr, m) {
  m.doc() = "Online FDR procedures on e-values and p-values";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);

  py::class_<StepOutcome>(m, "StepOutcome")
      .def_readonly("alpha", &StepOutcome::alpha)
      .def_readonly("decision", &StepOutcome::decision)
      .def_readonly("newly_rejected", &StepOutcome::newly_rejected)
      .def_readonly("wealth", &StepOutcome::wealth)
      .def("__repr__", [](const StepOutcome& o) {
        return "StepOutcome(alpha=" + format_double(o.alpha) + ", decision=" + (o.decision ? "True" : "False") +
               ")";
      });

  py::class_<OnlineProcedure>(m, "Procedure")
      .def(
          "step",
          [](OnlineProcedure& p, double value, std::optional<std::size_t> deadline) {
            return p.step(value, to_deadline(deadline));
          },
          py::arg("value"), py::arg("deadline") = py::none())
      .def_property_readonly("name", &OnlineProcedure::name)
      .def_property_readonly("kind", [](const OnlineProcedure& p) { return std::string(to_string(p.kind())); })
      .def_property_readonly("time", &OnlineProcedure::time)
      .def_property_readonly("delta", &OnlineProcedure::delta)
      .def_property_readonly("rejected", &OnlineProcedure::rejected)
      .def_property_readonly("num_rejections", &OnlineProcedure::num_rejections);

  m.def("procedure_names", &procedure_names);
  m.def(
      "make_procedure",
      [](const std::string& name, double delta, const std::string& gamma, std::optional<std::uint64_t> seed) {
        ProcedureOptions o;
        o.delta = delta;
        o.gamma = resolve_gamma(gamma);
        o.seed = seed;
        return make_procedure(name, o);
      },
      py::arg("name"), py::arg("delta") = 0.1, py::arg("gamma") = "default", py::arg("seed") = py::none(),
      "Builds a procedure by registry name. gamma is a rule name or a gamma CSV path.");

  m.def("gamma_default", &gamma_default, py::arg("t"));
  m.def("harmonic", &harmonic, py::arg("t"));
  m.def("calibrate_p", py::overload_cast<double, std::size_t, double, double>(&calibrate_p), py::arg("p"),
        py::arg("t"), py::arg("gamma_t"), py::arg("delta"));
  m.def("restricted_round", &restricted_round, py::arg("x"), py::arg("alpha_hat"), py::arg("u"));
  m.def(
      "ebh_offline", [](const std::vector<double>& e, double delta) { return ebh_offline(e, delta); },
      py::arg("e_values"), py::arg("delta") = 0.1);
  m.def(
      "donation_ebh_offline",
      [](const std::vector<double>& e, double delta) { return donation_ebh_offline(e, delta); },
      py::arg("e_values"), py::arg("delta") = 0.1);

  m.def(
      "gen_gaussian_local",
      [](std::size_t n, double pi1, double mu1, double rho, std::size_t lag, double delta, std::uint64_t seed) {
        GaussianLocalConfig c;
        c.m = n;
        c.pi1 = pi1;
        c.mu1 = mu1;
        c.rho = rho;
        c.lag = lag;
        c.delta = delta;
        c.seed = seed;
        return stream_dict(gen_gaussian_local(c));
      },
      py::arg("m") = 200, py::arg("pi1") = 0.3, py::arg("mu1") = 3.0, py::arg("rho") = 0.5,
      py::arg("lag") = 100, py::arg("delta") = 0.1, py::arg("seed") = 0);
  m.def(
      "gen_bounded_hoeffding",
      [](std::size_t n, double pi1, double mu1, std::size_t n_samples, double delta, std::uint64_t seed) {
        BoundedHoeffdingConfig c;
        c.m = n;
        c.pi1 = pi1;
        c.mu1 = mu1;
        c.n_samples = n_samples;
        c.delta = delta;
        c.seed = seed;
        return stream_dict(gen_bounded_hoeffding(c));
      },
      py::arg("m") = 200, py::arg("pi1") = 0.3, py::arg("mu1") = 3.0, py::arg("n_samples") = 100,
      py::arg("delta") = 0.1, py::arg("seed") = 0);

  m.def(
      "run_trials",
      [](const std::vector<std::string>& procedures, const std::string& setting, std::size_t n_trials,
         std::size_t n, double pi1, double delta, std::uint64_t seed, std::size_t threads) {
        GeneratorConfig gen;
        if (setting == "gaussian") {
          GaussianLocalConfig c;
          c.m = n;
          c.pi1 = pi1;
          c.delta = delta;
          gen = c;
        } else if (setting == "hoeffding") {
          BoundedHoeffdingConfig c;
          c.m = n;
          c.pi1 = pi1;
          c.delta = delta;
          gen = c;
        } else {
          throw ConfigError("unknown setting: " + setting);
        }
        TrialOptions opts;
        opts.delta = delta;
        opts.threads = threads;
        const auto report = [&] {
          py::gil_scoped_release release;
          return ofdr::run_trials(procedures, gen, n_trials, seed, opts);
        }();
        py::dict out;
        for (const auto& p : report.procedures) {
          py::dict row;
          row["power"] = p.mean_power;
          row["power_se"] = p.se_power;
          row["sup_fdp"] = p.mean_sup_fdp;
          row["sup_fdp_se"] = p.se_sup_fdp;
          row["rejections"] = p.mean_rejections;
          row["seconds"] = p.mean_seconds;
          out[py::str(p.procedure)] = row;
        }
        return out;
      },
      py::arg("procedures"), py::arg("setting") = "gaussian", py::arg("n_trials") = 200, py::arg("m") = 200,
      py::arg("pi1") = 0.3, py::arg("delta") = 0.1, py::arg("seed") = 1, py::arg("threads") = 1,
      "Mean power, sup-FDP and rejections per procedure.");

  m.def(
      "verify",
      [](std::size_t streams, std::size_t max_t, std::uint64_t seed) {
        VerifyOptions o;
        o.streams = streams;
        o.max_t = max_t;
        o.seed = seed;
        const auto checks = [&] {
          py::gil_scoped_release release;
          return run_verification(o);
        }();
        py::list out;
        for (const auto& c : checks) {
          py::dict row;
          row["name"] = c.name;
          row["passed"] = c.passed;
          row["cases"] = c.cases;
          row["detail"] = c.detail;
          out.append(row);
        }
        return out;
      },
      py::arg("streams") = 20, py::arg("max_t") = 12, py::arg("seed") = 1,
      "Runs the oracle comparisons; one dict per check.");
}
