#pragma once

#include <string>
#include <vector>

#include "loopq/series.hpp"

// Exact R-matrix of the projective line: R(z) = sum_n R_n z^n with
//   R_n = c_n [[1, 2n(-1)^(n-1) i], [2n i, (-1)^n]],
//   c_n = -prod_{k=1}^{n-1}(4k^2-1) / (2^(2n) n!),
// its logarithm r(z) = sum_l r_l z^l, the parity/non-vanishing
// certification of the r_l, and the supporting inequality suite.
//
// Index convention used throughout: the classical (M)_i^j with lower index i
// and upper index j is the entry at row j, column i. In particular (R_n)_1^1
// is at(0,0) and (R_n)_1^2 is at(1,0), which pins the identity
// (R_n)_1^1 = (-i/2n) (R_n)_1^2.
namespace loopq::p1 {

// c_n for n >= 1 (c_1 = -1/4, c_2 = -3/32, ...).
mpq_class c_coefficient(int n);

// C(n) = prod_{k=1}^{n-1} (1 - 1/(4k^2)); strictly decreasing, bounded
// below by 62/100.
mpq_class C_product(int n);

// R_n for n >= 0 (R_0 = I).
Mat2 R_matrix(int n);

// R(z) truncated at the given order.
MatrixSeries R_series(int order);

// Coefficient r_l of log R(z); requires 1 <= l <= truncation.
Mat2 r_coefficient(int l, int truncation);

// Same coefficient through the finite multi-index expansion
//   r_l = sum_{m=1}^{l} ((-1)^(m-1)/m) sum_{i_1+..+i_m=l, i_j>=1} R_{i_1}...R_{i_m},
// an independent second route used to cross-check r_coefficient.
Mat2 r_direct(int l);

// Tail of the expansion above with m >= 2 only, i.e. r_l - R_l.
Mat2 rprime_tail(int l);

enum class ShapeClass { Odd, Even, Irregular };

std::string shape_name(ShapeClass s);

// Shape classification of an r_l candidate:
//   odd l:  [[a, b i], [b i, -a]] with rational a, b;
//   even l: [[0, c i], [-c i, 0]] with rational c.
// Witnesses are a = re at(0,0), b = im at(0,1), c = im at(0,1); for an
// Irregular matrix the witnesses are zero and meaningless.
struct RlShape {
  ShapeClass shape = ShapeClass::Irregular;
  mpq_class a, b, c;
  bool nonzero = false;  // all shape witnesses nonzero
};

RlShape classify_r(int l, const Mat2& m);

struct CertItem {
  int l = 0;
  RlShape shape;
  bool pass = false;  // expected parity shape and nonzero witnesses
};

struct CertificationReport {
  int max_l = 0;
  bool pass = false;
  std::vector<CertItem> items;
};

// Certifies, for every 1 <= l <= max_l, that r_l has the parity shape above
// with nonvanishing entries. Exact arithmetic throughout.
CertificationReport certify_nonvanishing(int max_l);

// sigma(n, l) = sum over compositions of n into l parts >= 0 of the product
// of factorials of the parts; sigma(0, l) = 1, sigma(n, 1) = n!.
mpz_class sigma(int n, int l);

// S(m) = sum_{k=3}^{m} 2^(k-3) (m-k)! / k for m >= 5, and T(m) = S(m)/(m-3)!.
mpq_class S_sum(int m);
mpq_class T_ratio(int m);

struct BoundCheck {
  std::string id;
  std::string range;
  bool strict = false;  // strict checks need margin > 0, others margin >= 0
  bool pass = false;
  mpq_class margin;      // worst slack over the range (exact)
  std::string worst_at;  // argument attaining it
};

struct BoundsReport {
  int max_n = 0;
  bool pass = false;
  std::vector<BoundCheck> checks;
};

// Verifies the finite-range inequality suite up to max_n >= 9:
//   - C(n) strictly decreasing and > 62/100;
//   - 62/100 (n-1)!/2 < |(R_n)_1^2| <= (n-1)!/2 and the (R_n)_1^1 analogue
//     with denominator 4n (squared-magnitude comparisons);
//   - sigma(n, l) <= (8/3)^(l-1) n! on the grid n, l <= min(max_n, 12);
//   - T strictly decreasing from m = 5, T(m) < 1, and T(m) < 477/1000
//     from m = 9;
//   - (1/2)|sum_k (R_k R_{m-k})_1^1| <= (15/256)(m-3)! for odd 7 <= m <= max_n;
//   - |(R_m)_1^1| >= (13/100)(m-2)! for 7 <= m <= max_n.
BoundsReport bounds_report(int max_n);

struct SeparationReport {
  int l = 0;
  bool pass = false;
  // Squared magnitudes of the single nonzero component of each entry.
  mpq_class lead_offdiag_mag2, tail_offdiag_mag2;
  bool offdiag_pass = false;
  bool diag_checked = false;  // diagonal separation applies to odd l only
  mpq_class lead_diag_mag2, tail_diag_mag2;
  bool diag_pass = false;
};

// Exact check that the leading term R_l dominates the tail r_l - R_l
// entrywise: |(R_l)_1^2| > |(R'_l)_1^2| always, and |(R_l)_1^1| > |(R'_l)_1^1|
// for odd l. Requires l >= 5.
SeparationReport rprime_bound_check(int l);

enum class RecursionConvention { RowSwap, ColSwap, TransposeRowSwap, TransposeColSwap };

// Diagnostic only. Residual of the one-step recursion
//   -(i/2) F(R_{n-1}) - (n-1) R_{n-1} = offdiag(R_n)
// at the v^(-n) dv coefficient, where F reorders the entries of the first
// matrix according to the selected convention. Returns LHS - RHS; a zero
// matrix means the closed form satisfies that reading of the recursion.
Mat2 recursion_residual(int n, RecursionConvention convention);

// JSON report serializers (schema 1); deterministic output.
std::string rmatrix_json(const std::vector<Mat2>& mats, const std::string& kind, int first_index);
std::string certify_json(const CertificationReport& rep);
std::string bounds_json(const BoundsReport& rep);
std::string separation_json(const SeparationReport& rep);

// Text renderings used by the command-line tool.
std::string certify_text(const CertificationReport& rep);
std::string bounds_text(const BoundsReport& rep);
std::string separation_text(const SeparationReport& rep);

}  // namespace loopq::p1
