#pragma once

#include <array>
#include <string>
#include <vector>

#include "loopq/rational.hpp"

namespace loopq {

// 2x2 matrix over GaussRational, row-major storage.
class Mat2 {
 public:
  Mat2() = default;  // zero matrix
  Mat2(GaussRational e00, GaussRational e01, GaussRational e10, GaussRational e11)
      : e_{std::move(e00), std::move(e01), std::move(e10), std::move(e11)} {}

  static Mat2 identity() { return Mat2(1, 0, 0, 1); }

  GaussRational& at(int row, int col) { return e_[static_cast<size_t>(row) * 2 + col]; }
  const GaussRational& at(int row, int col) const {
    return e_[static_cast<size_t>(row) * 2 + col];
  }

  bool is_zero() const;
  Mat2 transpose() const { return Mat2(e_[0], e_[2], e_[1], e_[3]); }

  Mat2 operator-() const { return Mat2(-e_[0], -e_[1], -e_[2], -e_[3]); }
  Mat2& operator+=(const Mat2& o);
  Mat2& operator-=(const Mat2& o);
  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(const GaussRational& c, const Mat2& m);

  friend bool operator==(const Mat2& a, const Mat2& b) { return a.e_ == b.e_; }
  friend bool operator!=(const Mat2& a, const Mat2& b) { return !(a == b); }

  // Row-major "[[a, b], [c, d]]" with entries in GaussRational::str() form.
  std::string str() const;

 private:
  std::array<GaussRational, 4> e_;
};

// Power series sum_{n=0..order} coeff(n) z^n with Mat2 coefficients,
// truncated at a fixed order carried by the value.
class MatrixSeries {
 public:
  explicit MatrixSeries(int order);
  static MatrixSeries identity(int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Mat2& coeff(int n) { return c_[static_cast<size_t>(n)]; }
  const Mat2& coeff(int n) const { return c_[static_cast<size_t>(n)]; }

  bool is_zero() const;

  MatrixSeries& operator+=(const MatrixSeries& o);
  MatrixSeries& operator-=(const MatrixSeries& o);
  friend MatrixSeries operator+(MatrixSeries a, const MatrixSeries& b) { return a += b; }
  friend MatrixSeries operator-(MatrixSeries a, const MatrixSeries& b) { return a -= b; }
  friend bool operator==(const MatrixSeries& a, const MatrixSeries& b) { return a.c_ == b.c_; }
  friend bool operator!=(const MatrixSeries& a, const MatrixSeries& b) { return !(a == b); }

 private:
  std::vector<Mat2> c_;
};

// Cauchy product truncated at min(a.order(), b.order()).
MatrixSeries series_mul(const MatrixSeries& a, const MatrixSeries& b);

// log of a series with constant term I, via log(I+X) = sum (-1)^(m-1) X^m / m.
// Throws std::invalid_argument if coeff(0) != I.
MatrixSeries series_log(const MatrixSeries& s);

// exp of a series with constant term 0. Throws if coeff(0) != 0.
MatrixSeries series_exp(const MatrixSeries& s);

// Coefficientwise l -> (-1)^l * transpose: the adjoint with respect to the
// pairing <f(-z), g(z)>, so M is "unitary" iff star_adjoint(M)*M = I.
MatrixSeries star_adjoint(const MatrixSeries& s);

// star_adjoint(s)*s - I, truncated at s.order(); zero iff s satisfies the
// twisted-loop-group condition to that order.
MatrixSeries symplectic_residual(const MatrixSeries& s);

}  // namespace loopq
