#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace loopq {

// Exact Gaussian rational re + im*i over arbitrary-precision rationals.
// Invariant: both components are canonical mpq values (reduced, positive
// denominator); every constructor and operation preserves this.
class GaussRational {
 public:
  GaussRational() : re_(0), im_(0) {}
  GaussRational(long n) : re_(n), im_(0) {}           // NOLINT: implicit by design
  GaussRational(const mpq_class& re) : re_(re) {}     // NOLINT: implicit by design
  GaussRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

  // num/den with den != 0; canonicalizes.
  static GaussRational rational(long num, long den);
  static GaussRational i() { return GaussRational(mpq_class(0), mpq_class(1)); }

  // Accepts the forms produced by str(): "p/q", "p", "p/q+r/s*i", "r/s*i",
  // "i", "-i", and sign variants. Throws std::invalid_argument on anything else.
  static GaussRational parse(const std::string& s);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_imaginary() const { return sgn(re_) == 0 && sgn(im_) != 0; }

  GaussRational conj() const { return GaussRational(re_, -im_); }
  // Squared magnitude re^2 + im^2; rational, so exact comparisons stay rational.
  mpq_class mag2() const { return re_ * re_ + im_ * im_; }

  GaussRational inverse() const;

  GaussRational operator-() const { return GaussRational(-re_, -im_); }
  GaussRational& operator+=(const GaussRational& o);
  GaussRational& operator-=(const GaussRational& o);
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }

  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return cmp(a.re_, b.re_) == 0 && cmp(a.im_, b.im_) == 0;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }
  // Lexicographic on (re, im); used only as a container ordering.
  friend bool operator<(const GaussRational& a, const GaussRational& b) {
    int c = cmp(a.re_, b.re_);
    return c != 0 ? c < 0 : cmp(a.im_, b.im_) < 0;
  }

  std::string str() const;

 private:
  mpq_class re_, im_;
};

// "p/q" for canonical q > 1, bare "p" for integers.
std::string rational_str(const mpq_class& q);
// Inverse of rational_str; throws std::invalid_argument on malformed input
// (including zero denominators).
mpq_class parse_rational(const std::string& s);

// floor(x * 10^digits) rendered with a decimal point, e.g. 17.0114 for
// digits = 4. Exact integer arithmetic; negative x truncates toward -inf.
std::string decimal_prefix(const mpq_class& x, int digits);

}  // namespace loopq
