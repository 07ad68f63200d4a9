#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "loopq/correlator.hpp"
#include "loopq/rmatrix.hpp"
#include "loopq/weyl.hpp"

namespace py = pybind11;

namespace {

std::string r_table_json(int max_l, int trunc) {
  if (max_l < 1) throw std::invalid_argument("max_l must be >= 1");
  if (trunc < 0) trunc = max_l;
  if (trunc < max_l) throw std::invalid_argument("trunc must be >= max_l");
  std::vector<loopq::Mat2> mats;
  for (int l = 1; l <= max_l; ++l) mats.push_back(loopq::p1::r_coefficient(l, trunc));
  return loopq::p1::rmatrix_json(mats, "r", 1);
}

std::string R_table_json(int max_n) {
  if (max_n < 0) throw std::invalid_argument("max_n must be >= 0");
  std::vector<loopq::Mat2> mats;
  for (int n = 0; n <= max_n; ++n) mats.push_back(loopq::p1::R_matrix(n));
  return loopq::p1::rmatrix_json(mats, "R", 0);
}

std::string certify(int max_l) { return loopq::p1::certify_json(loopq::p1::certify_nonvanishing(max_l)); }

std::string bounds(int max_n) { return loopq::p1::bounds_json(loopq::p1::bounds_report(max_n)); }

std::string separation(int l) { return loopq::p1::separation_json(loopq::p1::rprime_bound_check(l)); }

loopq::corr::CorrelatorExpression translate_expr(int k, int lbar, int r) {
  return loopq::corr::descendent_to_ancestor(k, lbar, r, {}, loopq::corr::Genus::formal());
}

loopq::weyl::DarbouxPolynomial monomial(const std::vector<int>& v, loopq::weyl::VarKind kind) {
  if (v.size() != 2 && v.size() != 4)
    throw std::invalid_argument("monomial wants [i, k] or [i, k, j, l]");
  for (int x : v)
    if (x < 0) throw std::invalid_argument("monomial indices must be >= 0");
  loopq::weyl::DarbouxVar a{kind, v[0], v[1]};
  loopq::weyl::DarbouxVar b = v.size() == 4 ? loopq::weyl::DarbouxVar{kind, v[2], v[3]} : a;
  loopq::weyl::DarbouxPolynomial poly;
  poly.add_term({a, b}, loopq::GaussRational(1));
  return poly;
}

std::string cocycle(const std::vector<int>& pp, const std::vector<int>& qq) {
  loopq::weyl::FockOperator defect = loopq::weyl::cocycle_defect(
      monomial(pp, loopq::weyl::VarKind::P), monomial(qq, loopq::weyl::VarKind::Q));
  if (!defect.is_scalar()) throw std::runtime_error("commutator defect is not a scalar");
  return defect.scalar_part().str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact loop-group engine: matrix tables, shape certification, inequality"
            " suites, kappa polynomials, ancestor translation, cocycle values";

  m.def("r_table_json", &r_table_json, py::arg("max_l"), py::arg("trunc") = -1,
        "JSON table of the logarithm coefficients r_1 .. r_max_l (exact entries;"
        " trunc controls the series order used to extract them, default max_l)");
  m.def("R_table_json", &R_table_json, py::arg("max_n"),
        "JSON table of the asymptotic-series coefficients R_0 .. R_max_n");
  m.def("certify_json", &certify, py::arg("max_l"),
        "JSON report certifying parity shape and nonvanishing of r_l for l <= max_l");
  m.def("bounds_json", &bounds, py::arg("max_n"),
        "JSON report for the finite-range inequality suite up to max_n (>= 9)");
  m.def("separation_json", &separation, py::arg("l"),
        "JSON report comparing the leading term of r_l against its tail (l >= 5)");
  m.def("kpoly", [](const std::vector<int>& ks) { return loopq::corr::kappa_pushforward(ks).str(); },
        py::arg("indices"), "Kappa-class pushforward polynomial, printed");
  m.def("kpoly_json", [](const std::vector<int>& ks) { return loopq::corr::kappa_pushforward(ks).json(); },
        py::arg("indices"), "Kappa-class pushforward polynomial as JSON");
  m.def("translate", [](int k, int lbar, int r) { return translate_expr(k, lbar, r).str(); },
        py::arg("k"), py::arg("lbar"), py::arg("r"),
        "Descendent-to-ancestor expansion of a lead insertion, printed");
  m.def("translate_json", [](int k, int lbar, int r) { return translate_expr(k, lbar, r).json(); },
        py::arg("k"), py::arg("lbar"), py::arg("r"),
        "Descendent-to-ancestor expansion as JSON");
  m.def("cocycle", &cocycle, py::arg("pp"), py::arg("qq"),
        "Exact commutator defect of a quantized (pp, qq) monomial pair; each"
        " monomial is [i, k] (squared variable) or [i, k, j, l]");
}
