// Acceptance gate: one check per release criterion, each printed as a single
// PASS/FAIL line with its runtime. Exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "loopq/correlator.hpp"
#include "loopq/rmatrix.hpp"
#include "loopq/weyl.hpp"

using loopq::GaussRational;
using loopq::Mat2;
using loopq::MatrixSeries;
namespace p1 = loopq::p1;
namespace weyl = loopq::weyl;
namespace corr = loopq::corr;

namespace {

GaussRational rat(long n, long d = 1) { return GaussRational::rational(n, d); }

GaussRational imag(long n, long d = 1) { return rat(n, d) * GaussRational::i(); }

mpq_class q(const std::string& s) {
  mpq_class v(s);
  v.canonicalize();
  return v;
}

std::vector<Mat2> frozen_r_table() {
  return {
      Mat2(rat(-1, 4), imag(-1, 2), imag(-1, 2), rat(1, 4)),
      Mat2(rat(0), imag(3, 8), imag(-3, 8), rat(0)),
      Mat2(rat(-1, 8), imag(-23, 32), imag(-23, 32), rat(1, 8)),
      Mat2(rat(0), imag(33, 16), imag(-33, 16), rat(0)),
      Mat2(rat(-533, 640), imag(-20839, 2560), imag(-20839, 2560), rat(533, 640)),
  };
}

weyl::MatN parity_mat2(std::mt19937& rng, int power) {
  std::uniform_int_distribution<int> num(-2, 2);
  std::uniform_int_distribution<int> den(1, 3);
  auto pick = [&] { return rat(num(rng), den(rng)); };
  weyl::MatN m(2);
  if (power % 2 != 0) {
    GaussRational off = pick();
    m.at(0, 0) = pick();
    m.at(0, 1) = off;
    m.at(1, 0) = off;
    m.at(1, 1) = pick();
  } else {
    GaussRational off = pick();
    m.at(0, 1) = off;
    m.at(1, 0) = -off;
  }
  return m;
}

// ---- criteria ----

// Exact log-coefficient table for l = 1..5.
bool table_criterion() {
  auto table = frozen_r_table();
  for (int l = 1; l <= 5; ++l)
    if (p1::r_coefficient(l, 5) != table[static_cast<size_t>(l - 1)]) return false;
  return true;
}

// |(R_7)_1^1| as an exact rational and its 4-digit decimal prefix.
bool magnitude_criterion() {
  Mat2 R7 = p1::R_matrix(7);
  if (R7.at(0, 0) != GaussRational(-q("1404728325/82575360"))) return false;
  return loopq::decimal_prefix(-R7.at(0, 0).re(), 4) == "17.0114";
}

// Parity shape and nonvanishing of every r_l up to l = 30.
bool certification_criterion() {
  auto rep = p1::certify_nonvanishing(30);
  if (!rep.pass || rep.items.size() != 30) return false;
  for (const auto& item : rep.items) {
    auto want = item.l % 2 ? p1::ShapeClass::Odd : p1::ShapeClass::Even;
    if (item.shape.shape != want || !item.shape.nonzero) return false;
  }
  return true;
}

// Twisted-loop-group membership of R and the star-antisymmetry of its log,
// both exactly at order 30.
bool symplectic_criterion() {
  MatrixSeries R = p1::R_series(30);
  if (!symplectic_residual(R).is_zero()) return false;
  MatrixSeries r = series_log(R);
  return star_adjoint(r) + r == MatrixSeries(30);
}

// The finite-range inequality suite up to n = 50.
bool bounds_criterion() {
  auto rep = p1::bounds_report(50);
  if (!rep.pass) return false;
  for (const auto& check : rep.checks)
    if (!check.pass) return false;
  return true;
}

// Exact domination of the l = 7 logarithm tail by its leading term, with the
// tail entries pinned to an independent recomputation.
bool separation_criterion() {
  auto rep = p1::rprime_bound_check(7);
  if (!rep.pass || !rep.offdiag_pass || !rep.diag_checked || !rep.diag_pass) return false;
  if (rep.lead_diag_mag2 != q("19886738897025/68719476736")) return false;
  if (rep.tail_diag_mag2 != q("8330398655049/84181359001600")) return false;
  if (rep.lead_offdiag_mag2 != q("974450205954225/17179869184")) return false;
  return rep.tail_offdiag_mag2 == q("15988905923769/21045339750400");
}

// Commutator defect of every quadratic monomial pair on the index grid
// i, j <= 2 and k, l <= 3: +(1 + delta delta) for matched (pp, qq) pairs,
// the negative for (qq, pp), zero otherwise.
bool cocycle_criterion() {
  struct Mono {
    weyl::DarbouxPolynomial poly;
    int kind;  // 0 = pp, 1 = pq, 2 = qq
    std::vector<std::pair<int, int>> vars;
  };
  std::vector<std::pair<int, int>> slots;
  for (int b = 0; b <= 2; ++b)
    for (int lv = 0; lv <= 3; ++lv) slots.push_back({b, lv});

  std::vector<Mono> monos;
  auto push = [&](weyl::VarKind ka, std::pair<int, int> a, weyl::VarKind kb,
                  std::pair<int, int> b, int kind) {
    weyl::DarbouxPolynomial p;
    p.add_term({weyl::DarbouxVar{ka, a.first, a.second}, weyl::DarbouxVar{kb, b.first, b.second}},
               rat(1));
    monos.push_back({p, kind, {a, b}});
  };
  for (size_t x = 0; x < slots.size(); ++x) {
    for (size_t y = x; y < slots.size(); ++y) {
      push(weyl::VarKind::P, slots[x], weyl::VarKind::P, slots[y], 0);
      push(weyl::VarKind::Q, slots[x], weyl::VarKind::Q, slots[y], 2);
    }
    for (size_t y = 0; y < slots.size(); ++y)
      push(weyl::VarKind::P, slots[x], weyl::VarKind::Q, slots[y], 1);
  }

  auto matches = [](const Mono& a, const Mono& b) {
    return (a.vars[0] == b.vars[0] && a.vars[1] == b.vars[1]) ||
           (a.vars[0] == b.vars[1] && a.vars[1] == b.vars[0]);
  };
  for (const auto& m1 : monos) {
    for (const auto& m2 : monos) {
      weyl::FockOperator defect = weyl::cocycle_defect(m1.poly, m2.poly);
      GaussRational want;
      if (m1.kind == 0 && m2.kind == 2 && matches(m1, m2))
        want = rat(1 + (m1.vars[0] == m1.vars[1] ? 1 : 0));
      else if (m1.kind == 2 && m2.kind == 0 && matches(m1, m2))
        want = rat(-1 - (m1.vars[0] == m1.vars[1] ? 1 : 0));
      if (want.is_zero()) {
        if (!defect.is_zero()) return false;
      } else {
        if (!defect.is_scalar() || defect.scalar_part() != want) return false;
      }
    }
  }
  return true;
}

// The scalar shift generator at cutoff 5: its Hamiltonian and its
// quantization, both in closed form.
bool shift_generator_criterion() {
  weyl::LaurentEndo s(1);
  s.set_coeff(-1, weyl::MatN::identity(1));
  auto ham = weyl::hamiltonian_of(s, 5);
  weyl::DarbouxPolynomial poly_want;
  poly_want.add_term({weyl::DarbouxVar{weyl::VarKind::Q, 0, 0}, weyl::DarbouxVar{weyl::VarKind::Q, 0, 0}},
                     rat(-1, 2));
  for (int m = 0; m + 1 <= 5; ++m)
    poly_want.add_term(
        {weyl::DarbouxVar{weyl::VarKind::P, 0, m}, weyl::DarbouxVar{weyl::VarKind::Q, 0, m + 1}},
        rat(-1));
  if (!(ham.poly == poly_want) || !ham.truncated) return false;

  weyl::FockOperator op_want;
  op_want.add_term(weyl::FockTermKey{{{0, 0}, {0, 0}}, {}, -1}, rat(-1, 2));
  for (int m = 0; m + 1 <= 5; ++m)
    op_want.add_term(weyl::FockTermKey{{{0, m + 1}}, {{0, m}}, 0}, rat(-1));
  auto shat = weyl::construct_s_hat(s, 5);
  return shat.op == op_want && shat.op == quantize(ham.poly) && shat.truncated;
}

// The forgetful pushforward polynomial: the two-point closed form on random
// inputs and the permutation mass for l <= 6.
bool kappa_criterion() {
  std::mt19937 rng(314159);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int trial = 0; trial < 5; ++trial) {
    int k1 = pick(rng), k2 = pick(rng);
    corr::KappaPolynomial want;
    std::vector<int> mono = {k1, k2};
    if (mono[0] > mono[1]) std::swap(mono[0], mono[1]);
    want.terms[mono] = 1;
    want.terms[{k1 + k2}] = 1;
    if (!(corr::kappa_pushforward({k1, k2}) == want)) return false;
  }
  std::vector<int> ks;
  mpz_class factorial = 1;
  for (int l = 1; l <= 6; ++l) {
    ks.push_back(2 * l);
    factorial *= l;
    if (corr::kappa_pushforward(ks).mass() != factorial) return false;
  }
  return true;
}

// The two-unit ancestor expansion of the lead insertion, all four terms with
// their signs.
bool translation_criterion() {
  corr::CorrelatorExpression got =
      corr::descendent_to_ancestor(0, 2, 2, {}, corr::Genus::formal());
  corr::CorrelatorExpression want = corr::CorrelatorExpression::parse(
      "<2 x>_g - <1 x | 0 #1>_0 <0 #1>_g - <0 x | 0 #1>_0 <1 #1>_g"
      " + <0 x | 0 #1>_0 <0 #1 | 0 #2>_0 <0 #2>_g");
  return got == want;
}

// Property suites: series log/exp inversion, the two routes to r_l, the
// composition recursion of sigma, and the Poisson-bracket homomorphism of
// the quadratic-Hamiltonian map.
bool property_criterion() {
  std::mt19937 rng(271828);
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 4);
  auto scalar = [&] {
    return rat(num(rng), den(rng)) + rat(num(rng), den(rng)) * GaussRational::i();
  };
  auto mat = [&] { return Mat2(scalar(), scalar(), scalar(), scalar()); };

  for (int order : {5, 10, 15}) {
    MatrixSeries x(order);
    for (int n = 1; n <= order; ++n) x.coeff(n) = mat();
    if (!(series_log(series_exp(x)) == x)) return false;
    MatrixSeries s = MatrixSeries::identity(order);
    for (int n = 1; n <= order; ++n) s.coeff(n) = mat();
    if (!(series_exp(series_log(s)) == s)) return false;
  }

  for (int l = 1; l <= 10; ++l)
    if (p1::r_coefficient(l, 10) != p1::r_direct(l)) return false;

  for (int n = 0; n <= 10; ++n) {
    for (int l = 1; l <= 10; ++l) {
      mpz_class want = 0;
      for (int j = 0; j <= n; ++j) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(j));
        want += f * p1::sigma(n - j, l);
      }
      if (p1::sigma(n, l + 1) != want) return false;
    }
  }

  for (int trial = 0; trial < 2; ++trial) {
    weyl::LaurentEndo a(2), b(2);
    a.set_coeff(-1, parity_mat2(rng, -1));
    a.set_coeff(2, parity_mat2(rng, 2));
    b.set_coeff(1, parity_mat2(rng, 1));
    b.set_coeff(0, parity_mat2(rng, 0));
    const int K = 10, window = 4;
    weyl::DarbouxPolynomial lhs =
        poisson_bracket(weyl::hamiltonian_of(a, K).poly, weyl::hamiltonian_of(b, K).poly);
    weyl::DarbouxPolynomial rhs = weyl::hamiltonian_of(weyl::endo_commutator(a, b), K).poly;
    if (!(lhs.filter_max_level(window) == rhs.filter_max_level(window))) return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    double budget_seconds;  // 0 = no runtime budget
    std::function<bool()> body;
  };
  std::vector<Criterion> criteria = {
      {"log-coefficient table l = 1..5 exact", 1.0, table_criterion},
      {"|(R_7)_1^1| exact value and decimal prefix 17.0114", 0.0, magnitude_criterion},
      {"shape certification l = 1..30", 30.0, certification_criterion},
      {"loop-group membership and star-antisymmetry at order 30", 0.0, symplectic_criterion},
      {"inequality suite n <= 50", 60.0, bounds_criterion},
      {"l = 7 tail separation with frozen tail values", 10.0, separation_criterion},
      {"quadratic commutator defect grid i,j <= 2, k,l <= 3", 5.0, cocycle_criterion},
      {"scalar shift generator at cutoff 5", 0.0, shift_generator_criterion},
      {"pushforward polynomial closed form and mass", 1.0, kappa_criterion},
      {"two-unit ancestor expansion of the lead insertion", 0.0, translation_criterion},
      {"property suites: series inversion, dual r routes, sigma recursion,"
       " bracket homomorphism",
       0.0, property_criterion},
  };

  int failures = 0;
  for (size_t idx = 0; idx < criteria.size(); ++idx) {
    const auto& c = criteria[idx];
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double elapsed =
        std::chrono::duration_cast<std::chrono::duration<double>>(
            std::chrono::steady_clock::now() - start)
            .count();
    bool in_budget = c.budget_seconds <= 0.0 || elapsed < c.budget_seconds;
    bool pass = ok && in_budget;
    std::printf("AC%02zu %s (%.2fs%s) %s%s%s\n", idx + 1, pass ? "PASS" : "FAIL", elapsed,
                c.budget_seconds > 0.0
                    ? (std::string(" / budget ") + std::to_string(c.budget_seconds) + "s").c_str()
                    : "",
                c.name.c_str(), error.empty() ? "" : " error: ", error.c_str());
    if (!pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
