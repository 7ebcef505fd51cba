#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arcbem/bench.hpp"

namespace py = pybind11;
using namespace arcbem;

namespace {

py::dict solve_json(const std::string& text) {
  ScenarioResult r = run_scenario(parse_scenario(text));
  write_outputs(r);
  py::dict d;
  d["report"] = report_to_json(r);
  d["density"] = r.density;
  const auto& T = r.space->mesh().t;
  d["breakpoints"] = std::vector<double>(T.begin(), T.end());
  return d;
}

py::list table_rows(const std::string& id, int max_N, bool unpreconditioned, int max_iter) {
  TableOptions opt;
  opt.max_N = max_N;
  opt.unpreconditioned = unpreconditioned;
  opt.max_iter = max_iter;
  py::list out;
  for (const TableRow& r : iteration_table(id, opt)) {
    py::dict d;
    d["table"] = r.table;
    d["row"] = r.row;
    d["variant"] = r.variant;
    d["N"] = r.N;
    d["k"] = r.k;
    d["reference"] = r.reference;
    d["measured"] = r.measured;
    d["converged"] = r.converged;
    d["skipped"] = r.skipped;
    d["note"] = r.note;
    d["within_tolerance"] = row_within_tolerance(r);
    out.append(d);
  }
  return out;
}

py::list convergence(const std::string& id, const std::vector<int>& Ns) {
  py::list out;
  for (const auto& s : convergence_study(id, Ns).series) {
    py::dict d;
    d["norm"] = s.norm;
    d["N"] = s.N;
    d["h"] = s.h;
    d["error"] = s.error;
    d["slope"] = s.slope;
    out.append(d);
  }
  return out;
}

py::list pade_sweep(double kL, const std::vector<int>& orders) {
  py::list out;
  for (const auto& r : pade_sensitivity(pade_sweep_scenario(kL), orders)) {
    py::dict d;
    d["order"] = r.order;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    out.append(d);
  }
  return out;
}

py::dict field(const std::string& text, double x0, double x1, double y0, double y1, int nx, int ny) {
  GridSpec g;
  g.x0 = x0;
  g.x1 = x1;
  g.y0 = y0;
  g.y1 = y1;
  g.nx = nx;
  g.ny = ny;
  FieldGrid f = field_map(parse_scenario(text), g);
  py::dict d;
  d["scattered"] = f.scattered;
  d["total"] = f.total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_arcbem, m) {
  // translators run newest first: the base class goes first
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("parse_quantity", &parse_quantity);
  m.def("normalize_scenario", [](const std::string& t) { return scenario_to_json(parse_scenario(t)); });
  m.def("solve_json", &solve_json);
  m.def("table_ids", &table_ids);
  m.def("table", &table_rows, py::arg("id"), py::arg("max_N") = 8000, py::arg("unpreconditioned") = true,
        py::arg("max_iter") = 500);
  m.def("convergence", &convergence, py::arg("case"),
        py::arg("N") = std::vector<int>{32, 64, 128, 256, 512});
  m.def("pade_sweep", &pade_sweep, py::arg("kL"), py::arg("orders"));
  m.def("field_json", &field);
  m.def("pade_error_bound", &pade_error_bound);
  m.def("pade_sqrt", [](cplx z, int order, double theta) { return pade_sqrt_scalar(z, pade_coefficients(order, theta)); });
  m.def("mathieu_a", [](int n, double q) { return mathieu_char(MathieuParity::even, n, q); });
  m.def("mathieu_b", [](int n, double q) { return mathieu_char(MathieuParity::odd, n, q); });
}
