#include <doctest.h>

#include <random>
#include <vector>

#include "loopq/weyl.hpp"

using namespace loopq::weyl;
using loopq::GaussRational;

namespace {

GaussRational rat(long n, long d = 1) { return GaussRational::rational(n, d); }

MatN mat1(const GaussRational& v) {
  MatN m(1);
  m.at(0, 0) = v;
  return m;
}

MatN mat2(const GaussRational& a, const GaussRational& b, const GaussRational& c,
          const GaussRational& d) {
  MatN m(2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

// Basis vector of the p_k Darboux coordinate: the z-expansion of (-z)^(-k-1)
// carries the sign (-1)^(k+1).
LaurentVector p_vector(int dim, int index, int level) {
  LaurentVector v(dim);
  v.add_component(-level - 1, index, rat(level % 2 == 0 ? -1 : 1));
  return v;
}

LaurentVector q_vector(int dim, int index, int level) {
  return LaurentVector::basis(dim, index, level);
}

DarbouxPolynomial var(VarKind kind, int basis, int level) {
  return DarbouxPolynomial::variable(DarbouxVar{kind, basis, level});
}

// Random symmetric/antisymmetric 2x2 rational matrices for property checks.
MatN random_parity_mat(std::mt19937& rng, int power) {
  std::uniform_int_distribution<int> num(-2, 2);
  std::uniform_int_distribution<int> den(1, 3);
  auto pick = [&] { return rat(num(rng), den(rng)); };
  if (power % 2 != 0) {
    GaussRational off = pick();
    return mat2(pick(), off, off, pick());
  }
  GaussRational off = pick();
  return mat2(rat(0), off, -off, rat(0));
}

}  // namespace

TEST_CASE("infinitesimal_symplectic_parity") {
  LaurentEndo a(1);
  a.set_coeff(-1, MatN::identity(1));  // odd power, symmetric
  CHECK(is_infinitesimal_symplectic(a));

  LaurentEndo b(1);
  b.set_coeff(0, MatN::identity(1));  // even power must be antisymmetric
  CHECK(!is_infinitesimal_symplectic(b));

  LaurentEndo c(2);
  c.set_coeff(0, mat2(rat(0), rat(1), rat(-1), rat(0)));
  CHECK(is_infinitesimal_symplectic(c));
  c.set_coeff(3, mat2(rat(1), rat(2), rat(2), rat(-5)));
  CHECK(is_infinitesimal_symplectic(c));
  c.set_coeff(2, mat2(rat(1), rat(0), rat(0), rat(0)));
  CHECK(!is_infinitesimal_symplectic(c));
}

TEST_CASE("omega_residue_pairing") {
  // Powers pair when they sum to -1, weighted by (-1)^(first power).
  CHECK(omega(q_vector(1, 0, 0), LaurentVector::basis(1, 0, -1)) == rat(1));
  CHECK(omega(LaurentVector::basis(1, 0, 1), LaurentVector::basis(1, 0, -2)) == rat(-1));
  CHECK(omega(q_vector(1, 0, 0), q_vector(1, 0, 1)) == rat(0));

  LaurentVector f(1);
  f.add_component(0, 0, rat(2));
  f.add_component(-1, 0, rat(5));
  CHECK(omega(f, f) == rat(0));

  // Orthogonality across basis indices.
  CHECK(omega(q_vector(2, 0, 0), LaurentVector::basis(2, 1, -1)) == rat(0));
  MatN g = mat2(rat(0), rat(1), rat(1), rat(0));
  CHECK(omega(q_vector(2, 0, 0), LaurentVector::basis(2, 1, -1), g) == rat(1));
}

TEST_CASE("omega_darboux_chart") {
  // Omega = sum dp ^ dq on the chart coordinates, for every level and index.
  for (int k = 0; k <= 3; ++k) {
    for (int i = 0; i < 2; ++i) {
      CHECK(omega(p_vector(2, i, k), q_vector(2, i, k)) == rat(1));
      CHECK(omega(q_vector(2, i, k), p_vector(2, i, k)) == rat(-1));
      CHECK(omega(p_vector(2, i, k), p_vector(2, i, k + 1)) == rat(0));
      CHECK(omega(q_vector(2, i, k), q_vector(2, i, k + 1)) == rat(0));
    }
  }
}

TEST_CASE("apply_shifts_powers") {
  LaurentEndo a(2);
  a.set_coeff(1, mat2(rat(1), rat(2), rat(2), rat(4)));
  LaurentVector f = LaurentVector::basis(2, 0, 3);
  LaurentVector g = apply(a, f);
  REQUIRE(g.components().count(4) == 1);
  CHECK(g.components().at(4)[0] == rat(1));
  CHECK(g.components().at(4)[1] == rat(2));
}

TEST_CASE("darboux_polynomial_algebra") {
  DarbouxPolynomial p = var(VarKind::P, 0, 1);
  DarbouxPolynomial q = var(VarKind::Q, 0, 1);
  CHECK((p * q) == (q * p));
  CHECK((p * q).degree() == 2);
  CHECK((p - p).is_zero());

  DarbouxPolynomial sum = p + q;
  CHECK(sum.derivative(DarbouxVar{VarKind::P, 0, 1}).terms().begin()->second == rat(1));
  CHECK((p * p).derivative(DarbouxVar{VarKind::P, 0, 1}) == rat(2) * p);
  CHECK(sum.filter_max_level(0).is_zero());
  CHECK(sum.filter_max_level(1) == sum);
}

TEST_CASE("poisson_bracket_values") {
  DarbouxPolynomial p = var(VarKind::P, 0, 0);
  DarbouxPolynomial q = var(VarKind::Q, 0, 0);
  DarbouxPolynomial one;
  one.add_term({}, rat(1));
  CHECK(poisson_bracket(p, q) == one);
  CHECK(poisson_bracket(q, p) == -one);
  CHECK(poisson_bracket(q, q).is_zero());
  CHECK(poisson_bracket(p, var(VarKind::Q, 1, 0)).is_zero());
  CHECK(poisson_bracket(p, var(VarKind::Q, 0, 1)).is_zero());

  // Leibniz in the second slot.
  DarbouxPolynomial q2 = q * q;
  CHECK(poisson_bracket(p, q2) == rat(2) * q);
  CHECK(poisson_bracket(p * p, q) == rat(2) * p);
  // {p^2, q^2} = 4 p q.
  CHECK(poisson_bracket(p * p, q * q) == rat(4) * (p * q));
}

TEST_CASE("hamiltonian_of_zero_and_validation") {
  LaurentEndo zero(2);
  auto h = hamiltonian_of(zero, 3);
  CHECK(h.poly.is_zero());
  CHECK(!h.truncated);

  LaurentEndo bad(2);
  bad.set_coeff(0, MatN::identity(2));
  CHECK_THROWS_AS(hamiltonian_of(bad, 3), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian_of(zero, -1), std::invalid_argument);
}

TEST_CASE("hamiltonian_of_scalar_shift") {
  // A = z^-1 on a one-dimensional space, levels <= 3:
  // P(A) = -q_0^2/2 - q_1 p_0 - q_2 p_1 - q_3 p_2, truncated at the cutoff.
  LaurentEndo a(1);
  a.set_coeff(-1, MatN::identity(1));
  auto h = hamiltonian_of(a, 3);
  CHECK(h.truncated);

  DarbouxPolynomial want;
  want.add_term({DarbouxVar{VarKind::Q, 0, 0}, DarbouxVar{VarKind::Q, 0, 0}}, rat(-1, 2));
  for (int m = 0; m + 1 <= 3; ++m)
    want.add_term({DarbouxVar{VarKind::P, 0, m}, DarbouxVar{VarKind::Q, 0, m + 1}}, rat(-1));
  CHECK(h.poly == want);
}

TEST_CASE("hamiltonian_of_lower_triangular_family") {
  // Dimension 2, s_1 symmetric at power -1. The quadratic Hamiltonian is the
  // negative of sum s_ij q^j_{1+n} p^i_n + (1/2) sum s_ij q^i_0 q^j_0.
  MatN s = mat2(rat(2), rat(-1, 3), rat(-1, 3), rat(5));
  LaurentEndo a(2);
  a.set_coeff(-1, s);
  const int K = 2;
  auto h = hamiltonian_of(a, K);
  CHECK(h.truncated);

  DarbouxPolynomial display;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int n = 0; n + 1 <= K; ++n)
        display.add_term({DarbouxVar{VarKind::Q, j, n + 1}, DarbouxVar{VarKind::P, i, n}},
                         s.at(i, j));
      display.add_term({DarbouxVar{VarKind::Q, i, 0}, DarbouxVar{VarKind::Q, j, 0}},
                       rat(1, 2) * s.at(i, j));
    }
  }
  CHECK(h.poly == -display);
}

TEST_CASE("hamiltonian_of_level_preserving_is_exact") {
  LaurentEndo a(2);
  a.set_coeff(0, mat2(rat(0), rat(7, 2), rat(-7, 2), rat(0)));
  auto h = hamiltonian_of(a, 2);
  CHECK(!h.truncated);
  // Level-preserving generator: p q terms only, no q q block.
  for (const auto& [mono, c] : h.poly.terms()) {
    REQUIRE(mono.size() == 2);
    CHECK(mono[0].kind != mono[1].kind);
  }
}

TEST_CASE("hamiltonian_respects_poisson_bracket") {
  // P([A, B]) = {P(A), P(B)} on every window safely inside the cutoff.
  std::mt19937 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    LaurentEndo a(2), b(2);
    a.set_coeff(-1, random_parity_mat(rng, -1));
    a.set_coeff(2, random_parity_mat(rng, 2));
    b.set_coeff(1, random_parity_mat(rng, 1));
    b.set_coeff(0, random_parity_mat(rng, 0));
    REQUIRE(is_infinitesimal_symplectic(a));
    REQUIRE(is_infinitesimal_symplectic(b));

    const int K = 10, window = 4;
    DarbouxPolynomial lhs =
        poisson_bracket(hamiltonian_of(a, K).poly, hamiltonian_of(b, K).poly);
    DarbouxPolynomial rhs = hamiltonian_of(endo_commutator(a, b), K).poly;
    CHECK(lhs.filter_max_level(window) == rhs.filter_max_level(window));
  }
}

TEST_CASE("quantize_weyl_table") {
  DarbouxPolynomial qq = var(VarKind::Q, 0, 1) * var(VarKind::Q, 0, 1);
  FockOperator qq_hat = quantize(qq);
  REQUIRE(qq_hat.terms().size() == 1);
  {
    const auto& [key, c] = *qq_hat.terms().begin();
    CHECK(key.qs == std::vector<FockVar>{{0, 1}, {0, 1}});
    CHECK(key.ds.empty());
    CHECK(key.hbar == -1);
    CHECK(c == rat(1));
  }

  DarbouxPolynomial pq = var(VarKind::P, 0, 1) * var(VarKind::Q, 0, 2);
  FockOperator pq_hat = quantize(pq);
  REQUIRE(pq_hat.terms().size() == 1);
  {
    const auto& [key, c] = *pq_hat.terms().begin();
    CHECK(key.qs == std::vector<FockVar>{{0, 2}});
    CHECK(key.ds == std::vector<FockVar>{{0, 1}});
    CHECK(key.hbar == 0);
    CHECK(c == rat(1));
  }

  DarbouxPolynomial pp = var(VarKind::P, 0, 1) * var(VarKind::P, 1, 0);
  FockOperator pp_hat = quantize(pp);
  REQUIRE(pp_hat.terms().size() == 1);
  {
    const auto& [key, c] = *pp_hat.terms().begin();
    CHECK(key.qs.empty());
    CHECK(key.ds == std::vector<FockVar>{{0, 1}, {1, 0}});
    CHECK(key.hbar == 1);
  }

  DarbouxPolynomial scalar;
  scalar.add_term({}, rat(7));
  CHECK(quantize(scalar).scalar_part() == rat(7));
  CHECK_THROWS_AS(quantize(var(VarKind::Q, 0, 0)), std::invalid_argument);
}

TEST_CASE("op_compose_normal_ordering") {
  FockOperator d, q;
  d.add_term(FockTermKey{{}, {{0, 0}}, 0}, rat(1));
  q.add_term(FockTermKey{{{0, 0}}, {}, 0}, rat(1));

  FockOperator one;
  one.add_term(FockTermKey{}, rat(1));
  CHECK(op_commutator(d, q) == one);
  CHECK(op_commutator(q, d) == -one);

  // [d^2, q^2] = 4 q d + 2.
  FockOperator d2 = op_compose(d, d);
  FockOperator q2 = op_compose(q, q);
  FockOperator want;
  want.add_term(FockTermKey{{{0, 0}}, {{0, 0}}, 0}, rat(4));
  want.add_term(FockTermKey{}, rat(2));
  CHECK(op_commutator(d2, q2) == want);

  // Distinct variables commute.
  FockOperator other;
  other.add_term(FockTermKey{{{1, 3}}, {}, 0}, rat(1));
  CHECK(op_commutator(d, other).is_zero());
}

TEST_CASE("op_compose_hbar_bookkeeping") {
  FockOperator a, b;
  a.add_term(FockTermKey{{}, {{0, 0}, {0, 0}}, 1}, rat(1));   // hbar d^2
  b.add_term(FockTermKey{{{0, 0}, {0, 0}}, {}, -1}, rat(1));  // q^2 / hbar
  FockOperator comm = op_commutator(a, b);
  FockOperator want;
  want.add_term(FockTermKey{{{0, 0}}, {{0, 0}}, 0}, rat(4));
  want.add_term(FockTermKey{}, rat(2));
  CHECK(comm == want);
}

TEST_CASE("cocycle_defect_matching_pairs") {
  // [quantized pp, quantized qq] - quantized {pp, qq} = 1 + delta delta
  // on matching variable pairs, with the opposite sign the other way around.
  auto P = [&](int i, int k, int j, int l) {
    return var(VarKind::P, i, k) * var(VarKind::P, j, l);
  };
  auto Q = [&](int i, int k, int j, int l) {
    return var(VarKind::Q, i, k) * var(VarKind::Q, j, l);
  };

  FockOperator same = cocycle_defect(P(0, 0, 0, 0), Q(0, 0, 0, 0));
  REQUIRE(same.is_scalar());
  CHECK(same.scalar_part() == rat(2));

  FockOperator distinct = cocycle_defect(P(0, 0, 1, 1), Q(0, 0, 1, 1));
  REQUIRE(distinct.is_scalar());
  CHECK(distinct.scalar_part() == rat(1));

  FockOperator swapped = cocycle_defect(Q(0, 0, 1, 1), P(0, 0, 1, 1));
  REQUIRE(swapped.is_scalar());
  CHECK(swapped.scalar_part() == rat(-1));

  CHECK(cocycle_defect(P(0, 0, 1, 1), Q(0, 0, 1, 0)).is_zero());
  CHECK(cocycle_defect(P(0, 0, 0, 0), P(0, 0, 0, 0)).is_zero());
  CHECK(cocycle_defect(P(0, 1, 1, 0), var(VarKind::P, 0, 1) * var(VarKind::Q, 1, 0)).is_zero());
}

TEST_CASE("fock_operator_serialization") {
  FockOperator op;
  op.add_term(FockTermKey{{{0, 1}}, {{1, 2}}, -1}, rat(-3, 4));
  std::string js = op.json();
  CHECK(js.find("\"schema\": 1") != std::string::npos);
  CHECK(js.find("\"hbar\": -1") != std::string::npos);
  CHECK(js.find("\"coeff\": \"-3/4\"") != std::string::npos);
  CHECK(op.str().find("q[0,1]") != std::string::npos);
  CHECK(op.json() == op.json());
}

TEST_CASE("construct_s_hat_scalar_shift") {
  // The operator of s = z^-1 at cutoff 5: -q_0^2/(2 hbar) - sum q_{m+1} d_m.
  LaurentEndo s(1);
  s.set_coeff(-1, MatN::identity(1));
  auto got = construct_s_hat(s, 5);
  CHECK(got.truncated);

  FockOperator want;
  want.add_term(FockTermKey{{{0, 0}, {0, 0}}, {}, -1}, rat(-1, 2));
  for (int m = 0; m + 1 <= 5; ++m)
    want.add_term(FockTermKey{{{0, m + 1}}, {{0, m}}, 0}, rat(-1));
  CHECK(got.op == want);

  auto viaH = hamiltonian_of(s, 5);
  CHECK(got.op == quantize(viaH.poly));
  CHECK(got.truncated == viaH.truncated);
}

TEST_CASE("construct_hats_match_quantized_hamiltonians") {
  std::mt19937 rng(97);
  for (int trial = 0; trial < 4; ++trial) {
    for (int K = 2; K <= 4; ++K) {
      LaurentEndo s(2);
      s.set_coeff(-1, random_parity_mat(rng, -1));
      s.set_coeff(-2, random_parity_mat(rng, -2));
      auto sh = construct_s_hat(s, K);
      auto hs = hamiltonian_of(s, K);
      CHECK(sh.op == quantize(hs.poly));
      CHECK(sh.truncated == hs.truncated);

      LaurentEndo r(2);
      r.set_coeff(1, random_parity_mat(rng, 1));
      r.set_coeff(2, random_parity_mat(rng, 2));
      auto rh = construct_r_hat(r, K);
      auto hr = hamiltonian_of(r, K);
      CHECK(rh.op == quantize(hr.poly));
      CHECK(rh.truncated == hr.truncated);
    }
  }

  LaurentEndo wrong_side(1);
  wrong_side.set_coeff(-1, MatN::identity(1));
  CHECK_THROWS_AS(construct_r_hat(wrong_side, 3), std::invalid_argument);
  LaurentEndo pos(1);
  pos.set_coeff(1, MatN::identity(1));
  CHECK_THROWS_AS(construct_s_hat(pos, 3), std::invalid_argument);
}

TEST_CASE("construct_r_hat_level_one_structure") {
  // r at power +1 on a two-dimensional space, cutoff 2: q-shift terms
  // -(r)_ij q[j, n] d[i, n+1] for n <= 1 and the hbar/2 double derivative
  // (r)_ij d[i, 0] d[j, 0].
  MatN r = mat2(rat(-1, 4), rat(-1, 2) * GaussRational::i(), rat(-1, 2) * GaussRational::i(),
                rat(1, 4));
  LaurentEndo a(2);
  a.set_coeff(1, r);
  auto got = construct_r_hat(a, 2);
  CHECK(got.truncated);

  FockOperator want;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int n = 0; n + 1 <= 2; ++n)
        want.add_term(FockTermKey{{{j, n}}, {{i, n + 1}}, 0}, -r.at(i, j));
      want.add_term(FockTermKey{{}, {{i, 0}, {j, 0}}, 1}, rat(1, 2) * r.at(i, j));
    }
  }
  CHECK(got.op == want);
}

TEST_CASE("quantization_commutator_tracks_cocycle") {
  // [quantize(a), quantize(b)] = quantize({a,b}) + C(a,b) with scalar C.
  DarbouxPolynomial a = var(VarKind::P, 0, 0) * var(VarKind::P, 0, 1);
  DarbouxPolynomial b = var(VarKind::Q, 0, 0) * var(VarKind::Q, 0, 1);
  FockOperator lhs = op_commutator(quantize(a), quantize(b));
  FockOperator rhs = quantize(poisson_bracket(a, b));
  FockOperator defect = lhs - rhs;
  REQUIRE(defect.is_scalar());
  CHECK(defect.scalar_part() == rat(1));
}
