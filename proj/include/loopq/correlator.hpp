#pragma once

#include <compare>
#include <gmpxx.h>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopq/rational.hpp"
#include "loopq/weyl.hpp"

// Formal correlator calculus: the kappa-class pushforward polynomial, the
// descendent-to-ancestor translation with its alternating two-point chains,
// and the lower/upper coefficient-family derivative actions on correlator
// expressions.
namespace loopq::corr {

using Scalar = GaussRational;

// Polynomial in classes k[a] with positive integer coefficients. The
// pushforward of prod psi_i^{k_i + 1} along the map forgetting l points is
// sum over sigma in S_l of prod over cycles c of k[sum of k_i over c], so the
// coefficients over all monomials total l!.
struct KappaPolynomial {
  std::map<std::vector<int>, mpz_class> terms;  // ascending index multiset -> coeff

  mpz_class mass() const;
  std::string str() const;   // e.g. "k[3]k[5] + k[8]"
  std::string json() const;  // schema 1
  bool operator==(const KappaPolynomial&) const = default;
};

KappaPolynomial kappa_pushforward(const std::vector<int>& ks);

// Genus tag: a concrete value or a formal "g + offset".
struct Genus {
  bool symbolic = false;
  int value = 0;  // concrete genus, or offset from the formal symbol g

  static Genus concrete(int g) {
    if (g < 0) throw std::invalid_argument("Genus: negative genus");
    return Genus{false, g};
  }
  static Genus formal(int offset = 0) { return Genus{true, offset}; }
  std::string str() const;
  friend auto operator<=>(const Genus&, const Genus&) = default;
};

// Insertion index: a concrete orthonormal-basis index, a free label, or a
// gluing label contracted across exactly two insertions of a term.
struct InsIndex {
  enum class Kind { Basis = 0, Free = 1, Glue = 2 };
  Kind kind = Kind::Basis;
  int num = 0;       // Basis value or Glue label
  std::string name;  // Free label

  static InsIndex basis(int v) {
    if (v < 0) throw std::invalid_argument("InsIndex: negative basis index");
    return InsIndex{Kind::Basis, v, {}};
  }
  static InsIndex free(std::string n) { return InsIndex{Kind::Free, 0, std::move(n)}; }
  static InsIndex glue(int label) {
    if (label < 1) throw std::invalid_argument("InsIndex: gluing labels start at 1");
    return InsIndex{Kind::Glue, label, {}};
  }
  std::string str() const;
  friend auto operator<=>(const InsIndex&, const InsIndex&) = default;
};

// One insertion: descendent power, ancestor power, index.
struct Insertion {
  int desc = 0;
  int anc = 0;
  InsIndex idx;

  friend auto operator<=>(const Insertion&, const Insertion&) = default;
};

// A single bracket with a genus tag and a multiset of insertions.
struct Symbol {
  Genus genus;
  std::vector<Insertion> ins;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// Variable factor q[j, n].
struct QFactor {
  int basis = 0;
  int level = 0;

  friend auto operator<=>(const QFactor&, const QFactor&) = default;
};

// One product term: q-factors times a product of symbols. Stored canonically:
// insertions sorted within each symbol, symbols and q-factors sorted, gluing
// labels renumbered to the minimum over consistent relabelings.
struct TermKey {
  std::vector<QFactor> qs;
  std::vector<Symbol> symbols;

  friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

TermKey canonical_term(TermKey key);

// Finite rational linear combination of terms; equality is decidable because
// all terms are kept canonical.
class CorrelatorExpression {
 public:
  CorrelatorExpression() = default;
  static CorrelatorExpression term(TermKey key, const Scalar& c = Scalar(1));

  void add_term(TermKey key, const Scalar& c);
  const std::map<TermKey, Scalar>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  CorrelatorExpression operator-() const;
  CorrelatorExpression& operator+=(const CorrelatorExpression& o);
  CorrelatorExpression& operator-=(const CorrelatorExpression& o);
  friend CorrelatorExpression operator+(CorrelatorExpression a, const CorrelatorExpression& b) {
    return a += b;
  }
  friend CorrelatorExpression operator-(CorrelatorExpression a, const CorrelatorExpression& b) {
    return a -= b;
  }
  friend CorrelatorExpression operator*(const Scalar& c, const CorrelatorExpression& e);
  friend CorrelatorExpression operator*(const CorrelatorExpression& a,
                                        const CorrelatorExpression& b);
  bool operator==(const CorrelatorExpression&) const = default;

  // Grammar, round-trip safe against parse():
  //   expr      := ['-'] term (('+' | '-') term)*
  //   term      := factor+                    (whitespace separated)
  //   factor    := coefficient | 'q[' j ',' n ']' | symbol
  //   symbol    := '<' insertion ('|' insertion)* '>_' genus
  //   insertion := desc ['~' anc] index
  //   index     := int | '#' int | identifier
  //   genus     := int | 'g' | 'g+' int | 'g-' int
  std::string str() const;
  static CorrelatorExpression parse(const std::string& text);
  std::string json() const;  // schema 1

 private:
  std::map<TermKey, Scalar> t_;
};

// Coefficient family (m_l) for l >= 1, each an NxN matrix; absent levels are
// zero. Entry conventions follow at(i, j) = (m_l)_{ij}.
class MatrixFamily {
 public:
  explicit MatrixFamily(int dim);
  void set(int l, const weyl::MatN& m);
  weyl::MatN at(int l) const;
  const std::map<int, weyl::MatN>& entries() const { return c_; }
  int dim() const { return dim_; }

 private:
  int dim_;
  std::map<int, weyl::MatN> c_;
};

// Expands <d^i_{k, anc lbar} tail>_g by trading r units of ancestor power for
// descendent power: the lead term <d^i_{k+r, lbar-r} tail>_g plus, for each
// chain length p = 1..r with sign (-1)^p, genus-zero two-point chains
// <d^i_{k+j0} d^#1> <d^#1_{j1} d^#2> ... <d^#p_{jp, lbar-r} tail>_g summed
// over j0 + ... + jp = r - p. Requires 0 <= r <= lbar.
CorrelatorExpression descendent_to_ancestor(int k, int lbar, int r,
                                            const std::vector<Insertion>& tail, Genus g,
                                            const InsIndex& lead = InsIndex::free("x"));

// Derivative action of a lower-triangular coefficient family (s_l), extended
// to products of symbols by the Leibniz rule. Per symbol, three groups:
//   1. q-shift: (s_l)_{ij} q[j, l+n] times the symbol with d^i_n inserted,
//      over l + n <= q_level_cutoff;
//   2. lowering: (s_l)_{i i_a} replaces insertion a by d^i_{k_a - l};
//      insertions of negative descendent power vanish;
//   3. for genus-0 symbols with exactly two insertions, the scalar
//      (1/2)((-1)^{k1} (s_{k1+k2+1})_{i1 i2} + (-1)^{k2} (s_{k1+k2+1})_{i2 i1})
//      replacing the symbol.
// Requires concrete genera, concrete basis indices, zero ancestor powers, and
// that every genus-0 symbol has at least two insertions.
CorrelatorExpression apply_s_action(const CorrelatorExpression& e, const MatrixFamily& s,
                                    int q_level_cutoff);

// Derivative action of an upper-triangular coefficient family (r_l). Per
// symbol, four groups:
//   1. q-shift: (r_l)_{ij} q[j, n] times the symbol with d^i_{n+l} inserted,
//      over n <= q_level_cutoff;
//   2. raising: (r_l)_{i i_a} replaces insertion a by d^i_{k_a + l};
//   3. genus reduction (g >= 1 only): (1/2)(-1)^{m+1} (r_l)_{ij} adds
//      d^i_{l-1-m}, d^j_m to the symbol at genus g - 1, for m = 0..l-1;
//   4. splitting: (1/2)(-1)^{m+1} (r_l)_{ij} replaces the symbol by
//      <d^i_{l-1-m} A>_{g'} <d^j_m B>_{g-g'} over g' = 0..g and over all
//      distributions (A, B) of the original insertions.
// Requires concrete genera, concrete basis indices, zero ancestor powers.
CorrelatorExpression apply_r_action(const CorrelatorExpression& e, const MatrixFamily& r,
                                    int q_level_cutoff);

// Replaces every gluing-label pair by an explicit sum over the orthonormal
// basis 0..rank-1. The result carries no gluing labels.
CorrelatorExpression expand_gluing(const CorrelatorExpression& e, int rank);

}  // namespace loopq::corr
