#include "loopq/series.hpp"

#include <algorithm>

namespace loopq {

bool Mat2::is_zero() const {
  for (const auto& e : e_)
    if (!e.is_zero()) return false;
  return true;
}

Mat2& Mat2::operator+=(const Mat2& o) {
  for (int k = 0; k < 4; ++k) e_[k] += o.e_[k];
  return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
  for (int k = 0; k < 4; ++k) e_[k] -= o.e_[k];
  return *this;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j);
  return r;
}

Mat2 operator*(const GaussRational& c, const Mat2& m) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = c * m.at(i, j);
  return r;
}

std::string Mat2::str() const {
  return "[[" + e_[0].str() + ", " + e_[1].str() + "], [" + e_[2].str() + ", " + e_[3].str() +
         "]]";
}

MatrixSeries::MatrixSeries(int order) {
  if (order < 0) throw std::invalid_argument("MatrixSeries: negative order");
  c_.resize(static_cast<size_t>(order) + 1);
}

MatrixSeries MatrixSeries::identity(int order) {
  MatrixSeries s(order);
  s.coeff(0) = Mat2::identity();
  return s;
}

bool MatrixSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Mat2& m) { return m.is_zero(); });
}

MatrixSeries& MatrixSeries::operator+=(const MatrixSeries& o) {
  if (o.order() != order()) throw std::invalid_argument("MatrixSeries: order mismatch");
  for (size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
  return *this;
}

MatrixSeries& MatrixSeries::operator-=(const MatrixSeries& o) {
  if (o.order() != order()) throw std::invalid_argument("MatrixSeries: order mismatch");
  for (size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
  return *this;
}

MatrixSeries series_mul(const MatrixSeries& a, const MatrixSeries& b) {
  int order = std::min(a.order(), b.order());
  MatrixSeries r(order);
  for (int n = 0; n <= order; ++n) {
    Mat2 acc;
    for (int k = 0; k <= n; ++k) acc += a.coeff(k) * b.coeff(n - k);
    r.coeff(n) = acc;
  }
  return r;
}

MatrixSeries series_log(const MatrixSeries& s) {
  if (s.coeff(0) != Mat2::identity())
    throw std::invalid_argument("series_log: constant term must be the identity");
  int order = s.order();
  MatrixSeries x = s;
  x.coeff(0) = Mat2();
  MatrixSeries result(order);
  MatrixSeries power = x;  // X^m; its low-order zeroes grow with m
  for (int m = 1; m <= order; ++m) {
    GaussRational c = GaussRational::rational(m % 2 == 1 ? 1 : -1, m);
    for (int n = m; n <= order; ++n) result.coeff(n) += c * power.coeff(n);
    if (m < order) power = series_mul(power, x);
  }
  return result;
}

MatrixSeries series_exp(const MatrixSeries& s) {
  if (!s.coeff(0).is_zero())
    throw std::invalid_argument("series_exp: constant term must vanish");
  int order = s.order();
  MatrixSeries result = MatrixSeries::identity(order);
  MatrixSeries power = MatrixSeries::identity(order);
  mpz_class fact(1);
  for (int m = 1; m <= order; ++m) {
    power = series_mul(power, s);
    fact *= m;
    GaussRational c(mpq_class(1, fact));
    for (int n = m; n <= order; ++n) result.coeff(n) += c * power.coeff(n);
  }
  return result;
}

MatrixSeries star_adjoint(const MatrixSeries& s) {
  MatrixSeries r(s.order());
  for (int n = 0; n <= s.order(); ++n) {
    r.coeff(n) = s.coeff(n).transpose();
    if (n % 2 == 1) r.coeff(n) = -r.coeff(n);
  }
  return r;
}

MatrixSeries symplectic_residual(const MatrixSeries& s) {
  MatrixSeries r = series_mul(star_adjoint(s), s);
  r.coeff(0) -= Mat2::identity();
  return r;
}

}  // namespace loopq
