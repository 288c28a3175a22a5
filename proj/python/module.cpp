#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hpol/circlemaps.hpp"
#include "hpol/entropy.hpp"
#include "hpol/errors.hpp"
#include "hpol/experiment.hpp"
#include "hpol/registry.hpp"
#include "hpol/suspension.hpp"
#include "hpol/verify.hpp"

namespace py = pybind11;
using namespace hpol;

namespace {

py::dict rotation_dict(const RotationNumber& r) {
  py::dict d;
  d["value"] = r.value;
  d["lo"] = r.lo;
  d["hi"] = r.hi;
  d["iterations"] = r.iterations;
  d["rational"] = r.rational;
  if (r.rational) d["fraction"] = py::make_tuple(r.p, r.q);
  return d;
}

py::dict report_dict(const SeparationReport& r) {
  py::dict d;
  d["system_id"] = r.system_id;
  d["n"] = r.n;
  d["eps"] = r.eps;
  d["sep_count"] = r.sep_count;
  d["net_count"] = r.net_count;
  d["grid_size"] = r.grid_size;
  d["sandwich"] = std::string(to_string(r.sandwich));
  return d;
}

py::dict estimate_dict(const EntropyEstimate& e) {
  py::dict d;
  d["system_id"] = e.system_id;
  d["headline"] = e.headline;
  d["cap"] = e.cap;
  d["saturated"] = e.saturated;
  d["grid_policy"] = e.grid_policy;
  py::list rows;
  for (const auto& r : e.rows) {
    py::dict row;
    row["eps"] = r.eps;
    row["slope"] = r.slope;
    row["intercept"] = r.intercept;
    row["residual"] = r.residual;
    row["n_used"] = r.n_used;
    rows.append(row);
  }
  d["rows"] = rows;
  py::list counts;
  for (const auto& r : e.reports) counts.append(report_dict(r));
  d["counts"] = counts;
  return d;
}

py::dict bound_dict(const BoundCheck& b) {
  py::dict d;
  d["lemma"] = b.lemma;
  d["lhs"] = b.lhs;
  d["rhs"] = b.rhs;
  d["margin"] = b.margin;
  d["error"] = b.error;
  d["holds"] = b.holds;
  d["params"] = b.params;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Polynomial entropy estimates, constructive covers and bound checks.";

  auto base = py::register_exception<Error>(m, "HpolError");
  py::register_exception<UnknownSystem>(m, "UnknownSystemError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<NotApplicable>(m, "NotApplicableError", base.ptr());

  m.def("list_systems", [] {
    py::list out;
    for (const auto& s : registered_systems()) {
      py::dict d;
      d["id"] = s.id;
      d["family"] = s.family;
      d["description"] = s.description;
      d["defaults"] = s.defaults;
      out.append(d);
    }
    return out;
  });

  m.def(
      "rotation_number",
      [](const std::string& system, const Params& params, std::size_t iterations, long power) {
        CircleLift lift = base_lift(system, params);
        if (power != 1) lift = power_lift(lift, power);
        return rotation_dict(rotation_number(lift, iterations));
      },
      py::arg("system"), py::arg("params") = Params{}, py::arg("iterations") = 100000, py::arg("power") = 1);

  m.def(
      "estimate",
      [](const std::string& system, const Params& params, std::vector<double> n, std::vector<double> eps,
         double burn_in) {
        BuiltSystem b = build_system(system, params);
        if (n.empty()) n = b.n_schedule;
        if (eps.empty()) eps = b.eps_schedule;
        EstimateOptions opts;
        opts.burn_in = burn_in;
        EntropyEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate_hpol(b.system, n, eps, b.grid, opts);
        }
        return estimate_dict(e);
      },
      py::arg("system"), py::arg("params") = Params{}, py::arg("n") = std::vector<double>{},
      py::arg("eps") = std::vector<double>{}, py::arg("burn_in") = 32.0);

  m.def(
      "run",
      [](const std::string& config_text) {
        ExperimentConfig cfg = ExperimentConfig::parse(config_text);
        RunResult r = run_experiment(cfg);
        py::dict d = estimate_dict(r.estimate);
        d["ok"] = r.ok();
        d["sandwich_ok"] = r.sandwich_ok;
        d["expectation_ok"] = r.expectation_ok;
        d["bounds_ok"] = r.bounds_ok;
        py::list files;
        for (const auto& f : r.files) files.append(f.string());
        d["files"] = files;
        return d;
      },
      py::arg("config_text"));

  m.def(
      "verify",
      [](const std::string& suite, unsigned seed, std::size_t instances) {
        VerifyReport rep = verify(suite, {seed, instances});
        py::dict d;
        d["suite"] = rep.suite;
        d["passed"] = rep.passed();
        d["seconds"] = rep.seconds;
        py::list checks;
        for (const auto& c : rep.checks) {
          py::dict row;
          row["name"] = c.name;
          row["value"] = c.value;
          row["lo"] = c.lo;
          row["hi"] = c.hi;
          row["margin"] = c.margin;
          row["passed"] = c.passed;
          row["detail"] = c.detail;
          checks.append(row);
        }
        d["checks"] = checks;
        return d;
      },
      py::arg("suite"), py::arg("seed") = 1u, py::arg("instances") = 20);

  m.def(
      "bound_instances",
      [](const std::string& lemma, std::size_t count, unsigned seed) {
        py::list out;
        for (const auto& b : bound_instances(lemma, count, seed)) out.append(bound_dict(b));
        return out;
      },
      py::arg("lemma"), py::arg("count") = 20, py::arg("seed") = 1u);

  m.def(
      "suspension_flow",
      [](const std::string& system, double t, double x, double y, const Params& params) {
        SuspensionFlow s(Isotopy::of_lift(base_lift(system, params)));
        Point p = s.flow(t, {x, y});
        return py::make_tuple(p.x, p.y);
      },
      py::arg("system"), py::arg("t"), py::arg("x"), py::arg("y"), py::arg("params") = Params{});
}
