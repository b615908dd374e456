#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vqsim/extrapolation.hpp"
#include "vqsim/scenario.hpp"

namespace py = pybind11;
using namespace vqsim;

namespace {

RunConfig config_from(const py::object& src) {
  if (py::isinstance<py::dict>(src)) {
    const std::string text = py::module_::import("json").attr("dumps")(src).cast<std::string>();
    return parse_config(nlohmann::json::parse(text));
  }
  return load_config(py::str(src).cast<std::string>());
}

py::dict table_dict(const SeriesTable& t) {
  py::dict out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    std::vector<double> col;
    col.reserve(t.rows.size());
    for (const auto& r : t.rows) col.push_back(r[c]);
    out[py::str(t.columns[c])] = col;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid variational simulator emulation";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateSystemError>(m, "DegenerateSystemError", PyExc_ArithmeticError);

  m.def("parse_config", [](const py::object& src) {
    const std::string text = config_from(src).to_json().dump();
    return py::module_::import("json").attr("loads")(text);
  }, py::arg("config"), "Validated config (dict or path) with defaults filled in.");

  m.def("run_trial", [](const py::object& src, std::uint64_t trial, std::optional<std::uint64_t> seed) {
    RunConfig cfg = config_from(src);
    if (seed) cfg.seed = *seed;
    HybridTrial res;
    {
      py::gil_scoped_release release;
      res = run_hybrid_trial(cfg, trial);
    }
    return table_dict(res.table);
  }, py::arg("config"), py::arg("trial") = 0, py::arg("seed") = py::none(), "One hybrid trial as a dict of columns.");

  m.def("trotter_scan", [](const py::object& src) {
    const RunConfig cfg = config_from(src);
    std::vector<ScanVariant> scans;
    {
      py::gil_scoped_release release;
      scans = run_trotter_scan(cfg);
    }
    py::dict out;
    for (const auto& s : scans) {
      std::vector<double> dt, avg, fin;
      for (const auto& r : s.scan.rows) {
        dt.push_back(r.dt);
        avg.push_back(r.average_distance);
        fin.push_back(r.final_distance);
      }
      py::dict v;
      v["dt"] = dt;
      v["average_distance"] = avg;
      v["final_distance"] = fin;
      v["best_dt"] = s.scan.optimum().dt;
      out[py::str(s.name)] = v;
    }
    return out;
  }, py::arg("config"));

  m.def("run", [](const py::object& src) {
    const RunConfig cfg = config_from(src);
    py::gil_scoped_release release;
    return run_scenario(cfg);
  }, py::arg("config"), "Run the configured scenario, writing outputs; returns the files.");

  m.def("trace_distance", [](const CMatrix& a, const CMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) throw std::invalid_argument("square matrices of equal size expected");
    int n = 0;
    while ((Eigen::Index{1} << n) < a.rows()) ++n;
    return trace_distance(DensityOperator(n, a), DensityOperator(n, b));
  }, py::arg("rho"), py::arg("sigma"));

  m.def("extrapolate", [](const std::vector<double>& r, const std::vector<double>& x, int order) {
    if (r.size() != x.size()) throw std::invalid_argument("r and x differ in length");
    std::vector<ExtrapolationPoint> pts;
    for (std::size_t i = 0; i < r.size(); ++i) pts.push_back({r[i], x[i], 0.0});
    const auto fit = extrapolate_zero_noise(pts, order);
    return py::make_tuple(fit.intercept, fit.coefficients);
  }, py::arg("r"), py::arg("x"), py::arg("order") = 1, "Zero-noise intercept and polynomial coefficients.");

  m.def("default_trotter_grid", &default_trotter_grid);
  m.def("cost_estimate", [](std::uint64_t n_v, std::uint64_t n_d, std::uint64_t n_h, std::uint64_t n_r_gates, std::uint64_t k,
                            std::uint64_t steps, std::uint64_t shots) {
    const auto c = cost_estimate(n_v, n_d, n_h, n_r_gates, k, steps, shots);
    return py::make_tuple(c.circuits, c.gates_per_circuit, c.total_gates);
  });
}
