// Python bindings: the operations a notebook needs, with plain Python and
// NumPy types at the boundary.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "renorm/acceptance.hpp"
#include "renorm/bounds.hpp"
#include "renorm/errors.hpp"
#include "renorm/oracle.hpp"
#include "renorm/record_io.hpp"
#include "renorm/spectral.hpp"

namespace py = pybind11;
using namespace renorm;

namespace {

UnimodalPermutation sigma_from(const std::vector<int>& images) {
  return images.empty() ? UnimodalPermutation::doubling() : UnimodalPermutation(images);
}

Pair make_pair(const std::vector<double>& coeffs, double t, double alpha) {
  const auto phi = coeffs.empty() ? PolyDiffeo::identity() : PolyDiffeo(coeffs);
  return Pair(phi, QtParams(t, alpha));
}

py::dict cycle_dict(const Cycle& c) {
  py::list intervals;
  for (const auto& iv : c.intervals) intervals.append(py::make_tuple(iv.lo, iv.hi, iv.orientation));
  py::dict d;
  d["p"] = c.p;
  d["intervals"] = intervals;
  d["combinatorics"] = c.combinatorics.images;
  return d;
}

py::dict record_dict(const FixedPointRecord& r) {
  py::dict d;
  d["alpha"] = r.alpha;
  d["t_star"] = r.t_star;
  d["coeffs"] = std::vector<double>(r.phi_star.coeffs().begin(), r.phi_star.coeffs().end());
  d["residual"] = r.residual;
  d["degree"] = r.degree;
  d["sigma"] = r.sigma.images;
  if (r.spectral) {
    d["eigenvalues"] = r.spectral->eigenvalues;
    d["delta"] = r.spectral->delta;
    d["expanding_count"] = r.spectral->expanding_count;
  }
  return d;
}

FixedPointRecord solve(double alpha, const std::vector<int>& sigma, int degree) {
  NewtonOptions o;
  o.degree = degree;
  o.confirm_degree = std::max(80, degree + 20);
  return fixed_point(alpha, sigma_from(sigma), std::nullopt, o);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decomposed renormalization of unimodal maps";
  m.attr("__version__") = kVersion;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  m.def("qt_eval", [](double t, double alpha, double x) { return qt_eval(QtParams(t, alpha), x); },
        py::arg("t"), py::arg("alpha"), py::arg("x"));

  m.def("eval_pair", [](const std::vector<double>& coeffs, double t, double alpha, const std::vector<double>& xs) {
          const auto pair = make_pair(coeffs, t, alpha);
          std::vector<double> out;
          out.reserve(xs.size());
          for (double x : xs) out.push_back(eval_pair(pair, x));
          return out;
        },
        py::arg("coeffs"), py::arg("t"), py::arg("alpha"), py::arg("x"),
        "phi(q_t(x)); empty coeffs means phi = id.");

  m.def("find_cycle", [](double t, double alpha, int period, const std::vector<double>& coeffs) -> py::object {
          const auto c = find_cycle(make_pair(coeffs, t, alpha), period);
          return c ? py::object(cycle_dict(*c)) : py::none();
        },
        py::arg("t"), py::arg("alpha") = 2.0, py::arg("period") = 2, py::arg("coeffs") = std::vector<double>{});

  m.def("find_superstable_t", [](double alpha, int q, double lo, double hi) {
          return find_superstable_t(PolyDiffeo::identity(), alpha, q, lo, hi);
        },
        py::arg("alpha"), py::arg("q"), py::arg("lo"), py::arg("hi"));

  m.def("fixed_point", [](double alpha, const std::vector<int>& sigma, int degree, bool spectrum) {
          auto rec = solve(alpha, sigma, degree);
          if (spectrum) rec.spectral = analyze_fixed_point(rec);
          return record_dict(rec);
        },
        py::arg("alpha") = 2.0, py::arg("sigma") = std::vector<int>{}, py::arg("degree") = kDefaultDegree,
        py::arg("spectrum") = false, "Fixed point of the decomposed operator; empty sigma means doubling.");

  m.def("fixed_point_json", [](double alpha, int degree) {
          auto rec = solve(alpha, {}, degree);
          rec.spectral = analyze_fixed_point(rec);
          RunConfig cfg;
          cfg.alpha = alpha;
          cfg.degree = degree;
          return record_to_json(rec, cfg, false);
        },
        py::arg("alpha") = 2.0, py::arg("degree") = kDefaultDegree);

  m.def("check_record_json", [](const std::string& text) {
          const auto rec = record_from_json(text);
          return fixed_point_residual(rec.pair(), rec.sigma, rec.degree);
        },
        py::arg("text"), "Re-measured residual of a serialized record.");

  m.def("linearization", [](double alpha, int degree) { return tangent_jacobian(solve(alpha, {}, degree)); },
        py::arg("alpha") = 2.0, py::arg("degree") = kDefaultDegree);

  m.def("delta_of_alpha", [](const std::vector<double>& alphas) {
          std::vector<py::tuple> rows;
          for (const auto& p : delta_of_alpha(alphas, UnimodalPermutation::doubling())) {
            rows.push_back(py::make_tuple(p.alpha, p.delta, p.expanding_count, p.t_star, p.residual));
          }
          return rows;
        },
        py::arg("alphas"), "(alpha, delta, expanding_count, t_star, residual) rows.");

  m.def("cascade_delta", [](double alpha, int levels) {
          const auto c = oracle::cascade_delta(alpha, levels);
          py::dict d;
          d["t"] = c.t;
          d["ratios"] = c.ratios;
          d["delta"] = c.delta;
          d["complete"] = c.complete;
          return d;
        },
        py::arg("alpha") = 2.0, py::arg("levels") = 9);

  m.def("real_bounds", [](double alpha, int depth) {
          const auto rec = solve(alpha, {}, kDefaultDegree);
          const auto orbit = nested_orbit(rec.pair(), rec.sigma, depth);
          const auto r = real_bounds_report(orbit.cycles);
          std::vector<double> central;
          for (const auto& l : r.levels) central.push_back(l.central_ratio);
          py::dict d;
          d["min_ratio"] = r.min_ratio;
          d["max_ratio"] = r.max_ratio;
          d["central_ratios"] = central;
          return d;
        },
        py::arg("alpha") = 2.0, py::arg("depth") = 8);

  m.def("verify", [](const std::vector<std::string>& criteria) {
          const auto results = run_acceptance(RunConfig{}, parse_criteria(criteria));
          std::vector<py::tuple> rows;
          for (const auto& r : results) rows.push_back(py::make_tuple(r.id, r.name, r.passed, r.detail));
          return rows;
        },
        py::arg("criteria") = std::vector<std::string>{}, "(id, name, passed, detail) per criterion.");
}
