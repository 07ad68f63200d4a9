#include "loopq/rmatrix.hpp"

#include <json.hpp>

#include <functional>
#include <sstream>

#include "loopq/parallel.hpp"

namespace loopq::p1 {

namespace {

mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

mpz_class pow2(int e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return p;
}

mpq_class make_frac(mpz_class num, mpz_class den) {
  mpq_class q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

}  // namespace

mpq_class c_coefficient(int n) {
  if (n < 1) throw std::invalid_argument("c_coefficient: n must be >= 1");
  mpz_class num(1);
  for (int k = 1; k <= n - 1; ++k) num *= 4 * static_cast<long>(k) * k - 1;
  return make_frac(-num, pow2(2 * n) * factorial(n));
}

mpq_class C_product(int n) {
  if (n < 1) throw std::invalid_argument("C_product: n must be >= 1");
  mpz_class num(1), den(1);
  for (int k = 1; k <= n - 1; ++k) {
    long kk = 4 * static_cast<long>(k) * k;
    num *= kk - 1;
    den *= kk;
  }
  return make_frac(std::move(num), std::move(den));
}

Mat2 R_matrix(int n) {
  if (n < 0) throw std::invalid_argument("R_matrix: n must be >= 0");
  if (n == 0) return Mat2::identity();
  GaussRational c(c_coefficient(n));
  mpq_class two_n(2 * static_cast<long>(n));
  GaussRational upper(mpq_class(0), n % 2 == 1 ? two_n : mpq_class(-two_n));
  GaussRational lower(mpq_class(0), two_n);
  GaussRational last(n % 2 == 0 ? mpq_class(1) : mpq_class(-1));
  return Mat2(c, c * upper, c * lower, c * last);
}

MatrixSeries R_series(int order) {
  MatrixSeries s(order);
  for (int n = 0; n <= order; ++n) s.coeff(n) = R_matrix(n);
  return s;
}

Mat2 r_coefficient(int l, int truncation) {
  if (l < 1) throw std::invalid_argument("r_coefficient: l must be >= 1");
  if (l > truncation) throw std::invalid_argument("r_coefficient: l exceeds truncation order");
  return series_log(R_series(truncation)).coeff(l);
}

namespace {

// sum over ordered compositions of l into m >= min_parts positive parts of
// ((-1)^(m-1)/m) R_{i_1}...R_{i_m}.
Mat2 composition_sum(int l, int min_parts) {
  std::vector<Mat2> R(static_cast<size_t>(l) + 1);
  for (int n = 1; n <= l; ++n) R[static_cast<size_t>(n)] = R_matrix(n);
  Mat2 acc;
  std::function<void(int, int, const Mat2&)> rec = [&](int remaining, int parts, const Mat2& prod) {
    if (remaining == 0) {
      if (parts >= min_parts) {
        GaussRational c = GaussRational::rational(parts % 2 == 1 ? 1 : -1, parts);
        acc += c * prod;
      }
      return;
    }
    for (int j = 1; j <= remaining; ++j) rec(remaining - j, parts + 1, prod * R[static_cast<size_t>(j)]);
  };
  rec(l, 0, Mat2::identity());
  return acc;
}

}  // namespace

Mat2 r_direct(int l) {
  if (l < 1) throw std::invalid_argument("r_direct: l must be >= 1");
  return composition_sum(l, 1);
}

Mat2 rprime_tail(int l) {
  if (l < 2) throw std::invalid_argument("rprime_tail: l must be >= 2");
  return composition_sum(l, 2);
}

std::string shape_name(ShapeClass s) {
  switch (s) {
    case ShapeClass::Odd: return "odd";
    case ShapeClass::Even: return "even";
    default: return "irregular";
  }
}

RlShape classify_r(int l, const Mat2& m) {
  RlShape out;
  const GaussRational& e00 = m.at(0, 0);
  const GaussRational& e01 = m.at(0, 1);
  const GaussRational& e10 = m.at(1, 0);
  const GaussRational& e11 = m.at(1, 1);
  bool offdiag_imaginary = sgn(e01.re()) == 0 && sgn(e10.re()) == 0;
  if (l % 2 == 1) {
    // [[a, b i], [b i, -a]] with rational a, b
    if (e00.is_real() && e11 == -e00 && offdiag_imaginary && e10 == e01) {
      out.shape = ShapeClass::Odd;
      out.a = e00.re();
      out.b = e01.im();
      out.nonzero = sgn(out.a) != 0 && sgn(out.b) != 0;
    }
  } else {
    // [[0, c i], [-c i, 0]] with rational c
    if (e00.is_zero() && e11.is_zero() && offdiag_imaginary && e10 == -e01) {
      out.shape = ShapeClass::Even;
      out.c = e01.im();
      out.nonzero = sgn(out.c) != 0;
    }
  }
  return out;
}

CertificationReport certify_nonvanishing(int max_l) {
  if (max_l < 1) throw std::invalid_argument("certify_nonvanishing: max_l must be >= 1");
  MatrixSeries r = series_log(R_series(max_l));
  CertificationReport rep;
  rep.max_l = max_l;
  rep.items.resize(static_cast<size_t>(max_l));
  parallel_for_index(max_l, [&](int idx) {
    int l = idx + 1;
    CertItem& item = rep.items[static_cast<size_t>(idx)];
    item.l = l;
    item.shape = classify_r(l, r.coeff(l));
    item.pass = item.shape.shape != ShapeClass::Irregular && item.shape.nonzero;
  });
  rep.pass = true;
  for (const auto& item : rep.items) rep.pass = rep.pass && item.pass;
  return rep;
}

mpz_class sigma(int n, int l) {
  if (n < 0) throw std::invalid_argument("sigma: n must be >= 0");
  if (l < 1) throw std::invalid_argument("sigma: l must be >= 1");
  std::vector<mpz_class> fact(static_cast<size_t>(n) + 1);
  fact[0] = 1;
  for (int j = 1; j <= n; ++j) fact[static_cast<size_t>(j)] = fact[static_cast<size_t>(j - 1)] * j;
  mpz_class acc(0);
  std::function<void(int, int, const mpz_class&)> rec = [&](int remaining, int parts, const mpz_class& prod) {
    if (parts == 1) {
      acc += prod * fact[static_cast<size_t>(remaining)];
      return;
    }
    for (int j = 0; j <= remaining; ++j) rec(remaining - j, parts - 1, prod * fact[static_cast<size_t>(j)]);
  };
  rec(n, l, mpz_class(1));
  return acc;
}

mpq_class S_sum(int m) {
  if (m < 5) throw std::invalid_argument("S_sum: m must be >= 5");
  mpq_class acc(0);
  for (int k = 3; k <= m; ++k) acc += make_frac(pow2(k - 3) * factorial(m - k), mpz_class(k));
  return acc;
}

mpq_class T_ratio(int m) { return S_sum(m) / mpq_class(factorial(m - 3)); }

namespace {

struct BoundAccumulator {
  BoundCheck check;
  bool first = true;

  BoundAccumulator(std::string id, std::string range, bool strict) {
    check.id = std::move(id);
    check.range = std::move(range);
    check.strict = strict;
  }

  void feed(const mpq_class& slack, const std::string& at) {
    if (first || slack < check.margin) {
      check.margin = slack;
      check.worst_at = at;
      first = false;
    }
  }

  BoundCheck finish() {
    check.pass = !first && (check.strict ? sgn(check.margin) > 0 : sgn(check.margin) >= 0);
    return check;
  }
};

std::string at_n(int n) { return "n=" + std::to_string(n); }
std::string at_m(int m) { return "m=" + std::to_string(m); }

}  // namespace

BoundsReport bounds_report(int max_n) {
  if (max_n < 9) throw std::invalid_argument("bounds_report: max_n must be >= 9");
  BoundsReport rep;
  rep.max_n = max_n;

  std::vector<Mat2> R(static_cast<size_t>(max_n) + 1);
  parallel_for_index(max_n + 1, [&](int n) { R[static_cast<size_t>(n)] = R_matrix(n); });
  std::vector<mpq_class> C(static_cast<size_t>(max_n) + 2);
  for (int n = 1; n <= max_n + 1; ++n) C[static_cast<size_t>(n)] = C_product(n);
  const mpq_class c62(62, 100);

  {
    BoundAccumulator acc("C_decreasing", "n=1.." + std::to_string(max_n - 1), true);
    for (int n = 1; n < max_n; ++n)
      acc.feed(C[static_cast<size_t>(n)] - C[static_cast<size_t>(n + 1)], at_n(n));
    rep.checks.push_back(acc.finish());
  }
  {
    BoundAccumulator acc("C_above_62_100", "n=1.." + std::to_string(max_n), true);
    for (int n = 1; n <= max_n; ++n) acc.feed(C[static_cast<size_t>(n)] - c62, at_n(n));
    rep.checks.push_back(acc.finish());
  }
  // Corollary bounds on the R_n entries, squared-magnitude comparisons.
  {
    BoundAccumulator lo("R_offdiag_lower", "n=1.." + std::to_string(max_n), true);
    BoundAccumulator hi("R_offdiag_upper", "n=1.." + std::to_string(max_n), false);
    BoundAccumulator dlo("R_diag_lower", "n=1.." + std::to_string(max_n), true);
    BoundAccumulator dhi("R_diag_upper", "n=1.." + std::to_string(max_n), false);
    for (int n = 1; n <= max_n; ++n) {
      mpq_class fac(factorial(n - 1));
      mpq_class off_bound = fac / 2;
      mpq_class diag_bound = fac / mpq_class(4 * static_cast<long>(n));
      mpq_class off2 = R[static_cast<size_t>(n)].at(1, 0).mag2();
      mpq_class diag2 = R[static_cast<size_t>(n)].at(0, 0).mag2();
      lo.feed(off2 - c62 * c62 * off_bound * off_bound, at_n(n));
      hi.feed(off_bound * off_bound - off2, at_n(n));
      dlo.feed(diag2 - c62 * c62 * diag_bound * diag_bound, at_n(n));
      dhi.feed(diag_bound * diag_bound - diag2, at_n(n));
    }
    rep.checks.push_back(lo.finish());
    rep.checks.push_back(hi.finish());
    rep.checks.push_back(dlo.finish());
    rep.checks.push_back(dhi.finish());
  }
  {
    int g = std::min(max_n, 12);
    BoundAccumulator acc("sigma_factorial", "n=0.." + std::to_string(g) + ", l=1.." + std::to_string(g),
                         false);
    const mpq_class ratio(8, 3);
    for (int l = 1; l <= g; ++l) {
      mpq_class pow(1);
      for (int e = 1; e < l; ++e) pow *= ratio;
      for (int n = 0; n <= g; ++n) {
        mpq_class bound = pow * mpq_class(factorial(n));
        acc.feed(bound - mpq_class(sigma(n, l)), "(n=" + std::to_string(n) + ", l=" + std::to_string(l) + ")");
      }
    }
    rep.checks.push_back(acc.finish());
  }
  {
    std::vector<mpq_class> T(static_cast<size_t>(max_n) + 2);
    for (int m = 5; m <= max_n + 1; ++m) T[static_cast<size_t>(m)] = T_ratio(m);
    BoundAccumulator dec("T_decreasing", "m=5.." + std::to_string(max_n), true);
    BoundAccumulator one("T_below_1", "m=5.." + std::to_string(max_n), true);
    BoundAccumulator tail("T_below_477_1000", "m=9.." + std::to_string(max_n), true);
    const mpq_class c477(477, 1000);
    for (int m = 5; m <= max_n; ++m) {
      dec.feed(T[static_cast<size_t>(m)] - T[static_cast<size_t>(m + 1)], at_m(m));
      one.feed(1 - T[static_cast<size_t>(m)], at_m(m));
      if (m >= 9) tail.feed(c477 - T[static_cast<size_t>(m)], at_m(m));
    }
    rep.checks.push_back(dec.finish());
    rep.checks.push_back(one.finish());
    rep.checks.push_back(tail.finish());
  }
  {
    BoundAccumulator acc("convolution_diag", "odd m=7.." + std::to_string(max_n), false);
    const mpq_class c15(15, 256);
    for (int m = 7; m <= max_n; m += 2) {
      Mat2 sum;
      for (int k = 1; k < m; ++k) sum += R[static_cast<size_t>(k)] * R[static_cast<size_t>(m - k)];
      mpq_class half_mag2 = sum.at(0, 0).mag2() / 4;
      mpq_class bound = c15 * mpq_class(factorial(m - 3));
      acc.feed(bound * bound - half_mag2, at_m(m));
    }
    rep.checks.push_back(acc.finish());
  }
  {
    BoundAccumulator acc("R_diag_growth", "m=7.." + std::to_string(max_n), false);
    const mpq_class c13(13, 100);
    for (int m = 7; m <= max_n; ++m) {
      mpq_class bound = c13 * mpq_class(factorial(m - 2));
      acc.feed(R[static_cast<size_t>(m)].at(0, 0).mag2() - bound * bound, at_m(m));
    }
    rep.checks.push_back(acc.finish());
  }

  rep.pass = true;
  for (const auto& check : rep.checks) rep.pass = rep.pass && check.pass;
  return rep;
}

SeparationReport rprime_bound_check(int l) {
  if (l < 5) throw std::invalid_argument("rprime_bound_check: l must be >= 5");
  Mat2 lead = R_matrix(l);
  Mat2 tail = rprime_tail(l);
  SeparationReport rep;
  rep.l = l;
  rep.lead_offdiag_mag2 = lead.at(1, 0).mag2();
  rep.tail_offdiag_mag2 = tail.at(1, 0).mag2();
  rep.offdiag_pass = rep.lead_offdiag_mag2 > rep.tail_offdiag_mag2;
  rep.pass = rep.offdiag_pass;
  if (l % 2 == 1) {
    rep.diag_checked = true;
    rep.lead_diag_mag2 = lead.at(0, 0).mag2();
    rep.tail_diag_mag2 = tail.at(0, 0).mag2();
    rep.diag_pass = rep.lead_diag_mag2 > rep.tail_diag_mag2;
    rep.pass = rep.pass && rep.diag_pass;
  }
  return rep;
}

Mat2 recursion_residual(int n, RecursionConvention convention) {
  if (n < 1) throw std::invalid_argument("recursion_residual: n must be >= 1");
  Mat2 prev = R_matrix(n - 1);
  Mat2 next = R_matrix(n);
  const GaussRational& m00 = prev.at(0, 0);
  const GaussRational& m01 = prev.at(0, 1);
  const GaussRational& m10 = prev.at(1, 0);
  const GaussRational& m11 = prev.at(1, 1);
  Mat2 reordered;
  switch (convention) {
    case RecursionConvention::RowSwap: reordered = Mat2(m10, m11, m00, m01); break;
    case RecursionConvention::ColSwap: reordered = Mat2(m01, m00, m11, m10); break;
    case RecursionConvention::TransposeRowSwap: reordered = Mat2(m01, m11, m00, m10); break;
    case RecursionConvention::TransposeColSwap: reordered = Mat2(m10, m00, m11, m01); break;
    default: throw std::invalid_argument("recursion_residual: unknown convention");
  }
  GaussRational minus_half_i(mpq_class(0), mpq_class(-1, 2));
  GaussRational scale(mpq_class(-(static_cast<long>(n) - 1)));
  Mat2 lhs = minus_half_i * reordered + scale * prev;
  Mat2 rhs(GaussRational(0), next.at(0, 1), next.at(1, 0), GaussRational(0));
  return lhs - rhs;
}

namespace {

using nlohmann::json;

json matrix_json(const Mat2& m) {
  return json::array({json::array({m.at(0, 0).str(), m.at(0, 1).str()}),
                      json::array({m.at(1, 0).str(), m.at(1, 1).str()})});
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string rmatrix_json(const std::vector<Mat2>& mats, const std::string& kind, int first_index) {
  json items = json::array();
  int idx = first_index;
  for (const auto& m : mats) {
    items.push_back(json{{"index", idx}, {"matrix", matrix_json(m)}});
    ++idx;
  }
  return dump(json{{"schema", 1}, {"kind", kind}, {"items", items}});
}

std::string certify_json(const CertificationReport& rep) {
  json items = json::array();
  for (const auto& item : rep.items) {
    json entries = json::object();
    if (item.shape.shape == ShapeClass::Odd) {
      entries["a"] = rational_str(item.shape.a);
      entries["b"] = rational_str(item.shape.b);
    } else if (item.shape.shape == ShapeClass::Even) {
      entries["c"] = rational_str(item.shape.c);
    }
    items.push_back(json{{"l", item.l},
                         {"shape", shape_name(item.shape.shape)},
                         {"entries", entries},
                         {"nonzero", item.shape.nonzero}});
  }
  return dump(json{{"schema", 1}, {"max_l", rep.max_l}, {"pass", rep.pass}, {"items", items}});
}

std::string bounds_json(const BoundsReport& rep) {
  json checks = json::array();
  for (const auto& check : rep.checks) {
    checks.push_back(json{{"id", check.id},
                          {"range", check.range},
                          {"strict", check.strict},
                          {"margin", rational_str(check.margin)},
                          {"worst_at", check.worst_at},
                          {"pass", check.pass}});
  }
  return dump(json{{"schema", 1}, {"max_n", rep.max_n}, {"pass", rep.pass}, {"checks", checks}});
}

std::string separation_json(const SeparationReport& rep) {
  json j{{"schema", 1},
         {"l", rep.l},
         {"pass", rep.pass},
         {"offdiag",
          {{"lead_mag2", rational_str(rep.lead_offdiag_mag2)},
           {"tail_mag2", rational_str(rep.tail_offdiag_mag2)},
           {"pass", rep.offdiag_pass}}}};
  if (rep.diag_checked) {
    j["diag"] = {{"lead_mag2", rational_str(rep.lead_diag_mag2)},
                 {"tail_mag2", rational_str(rep.tail_diag_mag2)},
                 {"pass", rep.diag_pass}};
  } else {
    j["diag"] = nullptr;
  }
  return dump(j);
}

std::string certify_text(const CertificationReport& rep) {
  std::ostringstream out;
  for (const auto& item : rep.items) {
    out << "l=" << item.l << " shape=" << shape_name(item.shape.shape);
    if (item.shape.shape == ShapeClass::Odd)
      out << " a=" << rational_str(item.shape.a) << " b=" << rational_str(item.shape.b);
    else if (item.shape.shape == ShapeClass::Even)
      out << " c=" << rational_str(item.shape.c);
    out << " nonzero=" << (item.shape.nonzero ? "yes" : "no") << "\n";
  }
  out << "overall: " << (rep.pass ? "pass" : "FAIL") << " (max_l=" << rep.max_l << ")\n";
  return out.str();
}

std::string bounds_text(const BoundsReport& rep) {
  std::ostringstream out;
  for (const auto& check : rep.checks) {
    out << check.id << " [" << check.range << "] margin=" << rational_str(check.margin) << " at "
        << check.worst_at << (check.strict ? " (strict)" : "") << ": "
        << (check.pass ? "pass" : "FAIL") << "\n";
  }
  out << "overall: " << (rep.pass ? "pass" : "FAIL") << " (max_n=" << rep.max_n << ")\n";
  return out.str();
}

std::string separation_text(const SeparationReport& rep) {
  std::ostringstream out;
  out << "l=" << rep.l << " offdiag lead_mag2=" << rational_str(rep.lead_offdiag_mag2)
      << " tail_mag2=" << rational_str(rep.tail_offdiag_mag2) << ": "
      << (rep.offdiag_pass ? "pass" : "FAIL") << "\n";
  if (rep.diag_checked) {
    out << "l=" << rep.l << " diag lead_mag2=" << rational_str(rep.lead_diag_mag2)
        << " tail_mag2=" << rational_str(rep.tail_diag_mag2) << ": "
        << (rep.diag_pass ? "pass" : "FAIL") << "\n";
  }
  out << "overall: " << (rep.pass ? "pass" : "FAIL") << " (l=" << rep.l << ")\n";
  return out.str();
}

}  // namespace loopq::p1
