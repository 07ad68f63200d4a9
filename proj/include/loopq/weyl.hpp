#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "loopq/rational.hpp"

// Weyl quantization of quadratic Hamiltonians on the symplectic loop space
// H((z^-1)) with Omega(f, g) = Res_{z=0} <f(-z), g(z)>. The Darboux chart is
//   f = sum_k q_k z^k + sum_k p_k (-z)^(-k-1),
// which makes Omega = sum dp_k ^ dq_k literally.
namespace loopq::weyl {

using Scalar = GaussRational;

// Dense square matrix over Scalar, row-major.
class MatN {
 public:
  explicit MatN(int n);
  static MatN identity(int n);

  int dim() const { return n_; }
  Scalar& at(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
  const Scalar& at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

  bool is_zero() const;
  MatN transpose() const;

  MatN operator-() const;
  MatN& operator+=(const MatN& o);
  MatN& operator-=(const MatN& o);
  friend MatN operator+(MatN a, const MatN& b) { return a += b; }
  friend MatN operator-(MatN a, const MatN& b) { return a -= b; }
  friend MatN operator*(const MatN& a, const MatN& b);
  friend MatN operator*(const Scalar& c, const MatN& m);
  friend bool operator==(const MatN& a, const MatN& b) { return a.n_ == b.n_ && a.e_ == b.e_; }
  friend bool operator!=(const MatN& a, const MatN& b) { return !(a == b); }

 private:
  int n_;
  std::vector<Scalar> e_;
};

// Finite Laurent polynomial sum_d A_d z^d with MatN coefficients.
class LaurentEndo {
 public:
  explicit LaurentEndo(int dim);

  int dim() const { return dim_; }
  // Stores A_d; a zero matrix erases the entry.
  void set_coeff(int d, const MatN& m);
  MatN coeff(int d) const;
  const std::map<int, MatN>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  LaurentEndo& operator+=(const LaurentEndo& o);
  LaurentEndo& operator-=(const LaurentEndo& o);
  friend LaurentEndo operator+(LaurentEndo a, const LaurentEndo& b) { return a += b; }
  friend LaurentEndo operator-(LaurentEndo a, const LaurentEndo& b) { return a -= b; }
  friend LaurentEndo operator*(const LaurentEndo& a, const LaurentEndo& b);
  friend bool operator==(const LaurentEndo& a, const LaurentEndo& b) {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }

 private:
  int dim_;
  std::map<int, MatN> c_;
};

// Infinitesimal symplectic condition: (-1)^d A_d^T + A_d = 0 for every power d.
bool is_infinitesimal_symplectic(const LaurentEndo& A);

LaurentEndo endo_commutator(const LaurentEndo& a, const LaurentEndo& b);

// H-valued Laurent polynomial, components indexed by power and basis index.
class LaurentVector {
 public:
  explicit LaurentVector(int dim) : dim_(dim) {}
  static LaurentVector basis(int dim, int index, int power);

  int dim() const { return dim_; }
  void add_component(int power, int index, const Scalar& v);
  const std::map<int, std::vector<Scalar>>& components() const { return c_; }

 private:
  int dim_;
  std::map<int, std::vector<Scalar>> c_;
};

LaurentVector apply(const LaurentEndo& A, const LaurentVector& f);

// Omega(f, g) = Res_{z=0} <f(-z), g(z)>; orthonormal pairing by default,
// or <u, v> = u^T G v for a supplied symmetric metric G.
Scalar omega(const LaurentVector& f, const LaurentVector& g);
Scalar omega(const LaurentVector& f, const LaurentVector& g, const MatN& metric);

enum class VarKind { P, Q };

struct DarbouxVar {
  VarKind kind;
  int basis;
  int level;
  auto operator<=>(const DarbouxVar&) const = default;
};

// Polynomial in the Darboux variables; a monomial is a sorted multiset.
class DarbouxPolynomial {
 public:
  static DarbouxPolynomial variable(const DarbouxVar& v);

  // Sorts the monomial, merges, and drops zero coefficients.
  void add_term(std::vector<DarbouxVar> mono, const Scalar& c);
  const std::map<std::vector<DarbouxVar>, Scalar>& terms() const { return t_; }

  bool is_zero() const { return t_.empty(); }
  int degree() const;

  DarbouxPolynomial operator-() const;
  DarbouxPolynomial& operator+=(const DarbouxPolynomial& o);
  DarbouxPolynomial& operator-=(const DarbouxPolynomial& o);
  friend DarbouxPolynomial operator+(DarbouxPolynomial a, const DarbouxPolynomial& b) {
    return a += b;
  }
  friend DarbouxPolynomial operator-(DarbouxPolynomial a, const DarbouxPolynomial& b) {
    return a -= b;
  }
  friend DarbouxPolynomial operator*(const DarbouxPolynomial& a, const DarbouxPolynomial& b);
  friend DarbouxPolynomial operator*(const Scalar& c, const DarbouxPolynomial& p);
  friend bool operator==(const DarbouxPolynomial& a, const DarbouxPolynomial& b) {
    return a.t_ == b.t_;
  }
  friend bool operator!=(const DarbouxPolynomial& a, const DarbouxPolynomial& b) {
    return !(a == b);
  }

  DarbouxPolynomial derivative(const DarbouxVar& v) const;
  // Keeps only monomials all of whose variables have level <= K.
  DarbouxPolynomial filter_max_level(int K) const;

  std::string str() const;

 private:
  std::map<std::vector<DarbouxVar>, Scalar> t_;
};

DarbouxPolynomial poisson_bracket(const DarbouxPolynomial& a, const DarbouxPolynomial& b);

struct HamiltonianResult {
  DarbouxPolynomial poly;
  bool truncated = false;  // some pairing fell outside the level cutoff
};

// P(A)(f) = (1/2) Omega(Af, f) on the chart with levels <= K. Every monomial
// both of whose variables have level <= K is present exactly; pairings that
// would involve a level beyond K are dropped and flagged. Requires A
// infinitesimal symplectic.
HamiltonianResult hamiltonian_of(const LaurentEndo& A, int K);

struct FockVar {
  int basis;
  int level;
  auto operator<=>(const FockVar&) const = default;
};

struct FockTermKey {
  std::vector<FockVar> qs;  // multiplication operators, sorted
  std::vector<FockVar> ds;  // derivations, sorted
  int hbar = 0;
  auto operator<=>(const FockTermKey&) const = default;
};

// Normal-ordered polynomial differential operator: sum of terms
// c * hbar^e * prod q * prod d/dq, with all q factors left of all d/dq.
class FockOperator {
 public:
  void add_term(FockTermKey key, const Scalar& c);
  const std::map<FockTermKey, Scalar>& terms() const { return t_; }

  bool is_zero() const { return t_.empty(); }
  bool is_scalar() const;
  Scalar scalar_part() const;

  FockOperator operator-() const;
  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);
  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(const Scalar& c, const FockOperator& op);
  friend bool operator==(const FockOperator& a, const FockOperator& b) { return a.t_ == b.t_; }
  friend bool operator!=(const FockOperator& a, const FockOperator& b) { return !(a == b); }

  // Sorted term list {"q": [[i,k],...], "d": [[i,k],...], "hbar": e,
  // "coeff": "..."} under {"schema": 1, "terms": [...]}.
  std::string json() const;
  std::string str() const;

 private:
  std::map<FockTermKey, Scalar> t_;
};

// Composition with the canonical commutation relations [d_v, q_v] = 1.
FockOperator op_compose(const FockOperator& a, const FockOperator& b);
FockOperator op_commutator(const FockOperator& a, const FockOperator& b);

// Weyl table per monomial: qq -> q q / hbar, pq -> q d, pp -> hbar d d,
// constant -> scalar. Monomials must have even degree <= 2.
FockOperator quantize(const DarbouxPolynomial& P);

// [quantize(a), quantize(b)] - quantize({a, b}); scalar for quadratic inputs.
FockOperator cocycle_defect(const DarbouxPolynomial& a, const DarbouxPolynomial& b);

struct OperatorResult {
  FockOperator op;
  bool truncated = false;
};

// Closed-form operators of lower/upper-triangular loop-group generators,
// truncated at level K. Both equal quantize(hamiltonian_of(.).poly) at the
// same cutoff; that equality pins the sign convention (the operator of the
// scalar s = z^-1 is -q_0^2/(2 hbar) - sum_m q_{m+1} d/dq_m).
OperatorResult construct_s_hat(const LaurentEndo& s, int K);  // powers strictly negative
OperatorResult construct_r_hat(const LaurentEndo& r, int K);  // powers strictly positive

}  // namespace loopq::weyl
