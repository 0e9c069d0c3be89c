#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hetsphere/density_io.hpp"
#include "hetsphere/errors.hpp"
#include "hetsphere/greens.hpp"
#include "hetsphere/quadrature_oracle.hpp"
#include "hetsphere/rayleigh_ritz.hpp"
#include "hetsphere/sumrules.hpp"

namespace py = pybind11;
using namespace hetsphere;

namespace {

DensitySpec from_mapping(const std::map<std::pair<int, int>, complex>& coefficients) {
  DensitySpec::Coefficients c;
  for (const auto& [lm, value] : coefficients) c.emplace(HarmonicIndex(lm.first, lm.second), value);
  return DensitySpec(std::move(c));
}

std::map<std::pair<int, int>, complex> to_mapping(const DensitySpec& d) {
  std::map<std::pair<int, int>, complex> out;
  for (const auto& [idx, c] : d.coefficients()) out.emplace(std::pair{idx.l, idx.m}, c);
  return out;
}

CutoffPolicy policy(double tolerance) {
  CutoffPolicy p;
  p.tolerance = tolerance;
  return p;
}

}  // namespace

PYBIND11_MODULE(_hetsphere, m) {
  m.doc() = "Spectral sum rules for the Laplacian on a sphere with a band-limited density.";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  auto density = py::register_exception<DensityError>(m, "DensityError", PyExc_ValueError);
  py::register_exception<NonConverged>(m, "NonConverged", PyExc_RuntimeError);
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", PyExc_RuntimeError);
  (void)domain;
  (void)density;

  py::class_<DensitySpec>(m, "Density")
      .def(py::init<>())
      .def(py::init(&from_mapping), py::arg("coefficients"),
           "Build from a mapping {(l, m): complex}; l = 0 is rejected.")
      .def_static("kappa_y10", &kappa_y10, py::arg("kappa"))
      .def_static("from_json", [](const std::string& text) { return density_from_json(nlohmann::json::parse(text)); })
      .def_static("load", [](const std::string& path) { return load_density(path); })
      .def("to_json", [](const DensitySpec& d) { return density_to_json(d).dump(); })
      .def_property_readonly("coefficients", &to_mapping)
      .def_property_readonly("band_limit", &DensitySpec::band_limit)
      .def("coefficient", &DensitySpec::coefficient, py::arg("l"), py::arg("m"))
      .def("scaled", &DensitySpec::scaled, py::arg("s"))
      .def("rotated", &rotate_density, py::arg("alpha"), py::arg("beta"), py::arg("gamma"))
      .def("__call__", &density_eval, py::arg("theta"), py::arg("phi"))
      .def("validate", [](const DensitySpec& d) { return validate_density(d).min_sigma; },
           "Check reality and positivity; returns the smallest sampled density.");

  m.def("wigner3j", &wigner3j);
  m.def("gaunt", &gaunt);
  m.def("green", py::overload_cast<int, double>(&green_closed), py::arg("q"), py::arg("x"));
  m.def("green_series", &green_series, py::arg("q"), py::arg("x"), py::arg("L"));

  m.def("exact_sum_rule_json",
        [](const DensitySpec& d, int order, double tolerance) {
          py::gil_scoped_release release;
          return report_to_json(exact_sum_rule(d, order, policy(tolerance))).dump();
        },
        py::arg("density"), py::arg("order"), py::arg("tolerance") = 1e-8);

  m.def("spectrum",
        [](const DensitySpec& d, int l_max, bool allow_large_lmax) {
          SolveOptions opts;
          opts.allow_large_lmax = allow_large_lmax;
          py::gil_scoped_release release;
          return solve_spectrum(d, l_max, opts).eigenvalues;
        },
        py::arg("density"), py::arg("l_max"), py::arg("allow_large_lmax") = false);

  m.def("numeric_sum_rule",
        [](const DensitySpec& d, int order, int l_max, int retained) {
          py::gil_scoped_release release;
          return numeric_sum_rule(solve_spectrum(d, l_max), order, retained);
        },
        py::arg("density"), py::arg("order"), py::arg("l_max") = 30, py::arg("retained") = 0);

  m.def("weyl_tail", [](int p, int N) { return weyl_tail(p, N).value; }, py::arg("p"), py::arg("N"));

  m.def("oracle_I1", [](const DensitySpec& d, int q) { return oracle_I1(d, q).value; });
  m.def("oracle_J1", [](const DensitySpec& d, int q, int p) { return oracle_J1(d, q, p).value; });
}
