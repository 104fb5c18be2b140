#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>

#include "wbfv/errors.hpp"
#include "wbfv/harness.hpp"

namespace py = pybind11;
using namespace wbfv;

namespace {

py::array_t<double> to_array(const CellField& u) {
  const auto n = static_cast<py::ssize_t>(u.n_cells());
  const auto nc = static_cast<py::ssize_t>(u.components());
  if (nc == 1) {
    py::array_t<double> a(n);
    auto r = a.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) r(i) = u[static_cast<int>(i)][0];
    return a;
  }
  py::array_t<double> a({n, nc});
  auto r = a.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t c = 0; c < nc; ++c) r(i, c) = u[static_cast<int>(i)][static_cast<std::size_t>(c)];
  return a;
}

CellField from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() == 1) {
    CellField u(static_cast<int>(a.shape(0)), 1);
    for (py::ssize_t i = 0; i < a.shape(0); ++i) u[static_cast<int>(i)][0] = a.at(i);
    return u;
  }
  if (a.ndim() != 2) throw ConfigError("expected a 1-d or 2-d array of cell values");
  CellField u(static_cast<int>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t c = 0; c < a.shape(1); ++c) u[static_cast<int>(i)][static_cast<std::size_t>(c)] = a.at(i, c);
  return u;
}

py::array_t<double> centers(const Grid& g) {
  py::array_t<double> x(g.n_cells());
  auto r = x.mutable_unchecked<1>();
  for (int i = 0; i < g.n_cells(); ++i) r(i) = g.cell_center(i);
  return x;
}

RunConfig make_config(const std::string& case_name, const std::string& scheme, const std::string& fluctuation,
                      std::optional<int> cells, std::optional<double> cfl, std::optional<double> t_end,
                      const std::map<std::string, std::string>& settings) {
  std::map<std::string, std::string> kv = settings;
  kv["case"] = case_name;
  kv["scheme"] = scheme;
  kv["fluctuation"] = fluctuation;
  if (cells) kv["cells"] = std::to_string(*cells);
  auto put = [&](const char* key, std::optional<double> v) {
    if (!v) return;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    kv[key] = buf;
  };
  put("cfl", cfl);
  put("tend", t_end);
  return config_from_settings(kv);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Well-balanced implicit and semi-implicit finite volume solvers for 1D balance laws.";
  m.attr("__version__") = WBFV_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("case_names", &builtin_case_names, "Names of the built-in test cases.");

  m.def(
      "run",
      [](const std::string& case_name, const std::string& scheme, const std::string& fluctuation,
         std::optional<int> cells, std::optional<double> cfl, std::optional<double> t_end,
         const std::map<std::string, std::string>& settings) {
        const RunConfig cfg = make_config(case_name, scheme, fluctuation, cells, cfl, t_end, settings);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_case(cfg);
        }
        py::dict out;
        out["x"] = centers(r.grid);
        out["initial"] = to_array(r.initial);
        out["final"] = to_array(r.final);
        out["stationary"] = r.stationary ? py::object(to_array(*r.stationary)) : py::none();
        out["time"] = r.time;
        out["steps"] = r.steps;
        out["stage_iterations"] = r.stage_iterations;
        out["wall_seconds"] = r.wall_seconds;
        return out;
      },
      py::arg("case"), py::arg("scheme") = "IWBM1", py::arg("fluctuation") = "PWCR", py::arg("cells") = py::none(),
      py::arg("cfl") = py::none(), py::arg("t_end") = py::none(),
      py::arg("settings") = std::map<std::string, std::string>{},
      "Run a built-in case to its final time. Extra config keys go in `settings`.");

  m.def(
      "steady",
      [](const std::string& case_name, const std::string& scheme, std::optional<double> cfl, double eps,
         long max_steps, const std::map<std::string, std::string>& settings) {
        const RunConfig cfg = make_config(case_name, scheme, "PWCR", std::nullopt, cfl, std::nullopt, settings);
        SteadyResult r;
        {
          py::gil_scoped_release release;
          r = run_to_steady_state(cfg, eps, max_steps);
        }
        py::dict out;
        out["converged"] = r.converged;
        out["x"] = centers(r.grid);
        out["final"] = to_array(r.final);
        out["time"] = r.time;
        out["steps"] = r.steps;
        out["stage_iterations"] = r.stage_iterations;
        out["residual"] = r.residual;
        out["wall_seconds"] = r.wall_seconds;
        if (cfg.case_name == "swe.test4") out["reference"] = to_array(steady_race_reference(cfg));
        return out;
      },
      py::arg("case") = "swe.test4", py::arg("scheme") = "IWBM1", py::arg("cfl") = py::none(),
      py::arg("eps") = 1e-12, py::arg("max_steps") = 2'000'000,
      py::arg("settings") = std::map<std::string, std::string>{},
      "Step until max|U^{n+1} - U^n| / dt < eps.");

  m.def(
      "l1_error",
      [](const py::array_t<double>& a, const py::array_t<double>& b, double dx) {
        const CellField fa = from_array(a), fb = from_array(b);
        if (!(dx > 0.0)) throw ConfigError("dx must be positive");
        const Grid g(0.0, dx * fa.n_cells(), fa.n_cells());
        return l1_error(fa, fb, g);
      },
      py::arg("a"), py::arg("b"), py::arg("dx"), "dx * sum |a - b| per component.");

  m.def("observed_order", &observed_order, py::arg("errors"), "log2(e_j / e_{j+1}); None where undefined.");
}
