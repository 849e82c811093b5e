#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypbayes/error.hpp"
#include "hypbayes/experiments.hpp"
#include "hypbayes/problems.hpp"
#include "hypbayes/wasserstein.hpp"

namespace py = pybind11;
using namespace hypbayes;

namespace {

ExperimentConfig config_from(const std::string& preset_or_json) {
  if (preset_or_json == "exp1" || preset_or_json == "exp2" || preset_or_json == "exp3") {
    return preset(parse_experiment_id(preset_or_json));
  }
  return parse_config(preset_or_json);
}

std::vector<double> to_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

py::dict field_dict(const CellField& f) {
  std::vector<double> x;
  for (std::size_t j = 0; j < f.size(); ++j) x.push_back(f.mesh().midpoint(j));
  py::dict d;
  d["x"] = x;
  d["value"] = f.values();
  return d;
}

}  // namespace

PYBIND11_MODULE(_hypbayes, m) {
  m.doc() = "Bayesian inverse problems for 1-D conservation laws";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ForwardError>(m, "ForwardError", base.ptr());

  m.def("preset", [](const std::string& name) { return dump_config(preset(parse_experiment_id(name))); },
        py::arg("name"), "JSON text of a named preset.");

  m.def(
      "solve",
      [](const std::string& config, std::optional<std::vector<double>> params, std::optional<std::size_t> cells) {
        const ExperimentConfig c = config_from(config);
        const Vector u = params ? to_vector(*params) : c.ground_truth;
        const std::size_t n = cells.value_or(c.cells);
        switch (c.experiment) {
          case ExperimentId::exp1: return field_dict(solve_exp1(u, c, n));
          case ExperimentId::exp2: return field_dict(solve_exp2(u, c, n));
          case ExperimentId::exp3: {
            const EulerField f = solve_exp3(u, c, n);
            py::dict d = field_dict(f.component(0));
            d["rho"] = d["value"];
            d["mom"] = f.component(1).values();
            d["ener"] = f.component(2).values();
            return d;
          }
        }
        throw ConfigError("unknown experiment");
      },
      py::arg("config"), py::arg("params") = py::none(), py::arg("cells") = py::none(),
      "Forward solution at time T. `config` is a preset name or JSON text.");

  m.def(
      "forward",
      [](const std::string& config, const std::vector<double>& params, std::optional<std::size_t> cells) {
        const ExperimentConfig c = config_from(config);
        return to_list(make_forward(c, cells.value_or(c.cells))(to_vector(params)));
      },
      py::arg("config"), py::arg("params"), py::arg("cells") = py::none(), "Window observations G(u).");

  m.def(
      "run_experiment",
      [](const std::string& config, const std::string& out, std::size_t workers) {
        RunOptions o;
        o.out = out;
        o.workers = workers;
        const ExperimentResult r = [&] {
          py::gil_scoped_release release;
          return run_experiment(config_from(config), o);
        }();
        py::dict d;
        d["posterior_mean"] = to_list(r.summary.mean);
        d["posterior_map"] = to_list(r.summary.map_estimate);
        d["acceptance_rate"] = r.acceptance_rate;
        d["data"] = to_list(r.data);
        d["retained_samples"] = r.pooled.size();
        return d;
      },
      py::arg("config"), py::arg("out") = "", py::arg("workers") = 1);

  m.def("w1", [](std::vector<double> a, std::vector<double> b) {
    return w1(EmpiricalDistribution(std::move(a)), EmpiricalDistribution(std::move(b)));
  });
  m.def("w1_brute", [](const std::vector<double>& a, const std::vector<double>& b) { return w1_brute(a, b); });

  m.def(
      "rate_check",
      [](const std::string& which, const std::vector<std::size_t>& cells, double cfl) {
        const RiemannCase c = which == "shock"         ? RiemannCase::shock
                              : which == "rarefaction" ? RiemannCase::rarefaction
                              : which == "constant"    ? RiemannCase::constant
                                                       : throw ConfigError("rate_check: unknown case '" + which + "'");
        SchemeConfig s;
        s.cfl_number = cfl;
        const RateCheckResult r = fv_rate_check(c, cells, s);
        std::vector<double> errors;
        for (const auto& row : r.rows) errors.push_back(row.l1_error);
        py::dict d;
        d["errors"] = errors;
        d["order"] = r.order;
        return d;
      },
      py::arg("case") = "shock", py::arg("cells") = std::vector<std::size_t>{16, 32, 64, 128, 256, 512},
      py::arg("cfl") = 0.5);
}
