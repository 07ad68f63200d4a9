#include "loopq/rational.hpp"

#include <cctype>
#include <vector>

namespace loopq {

GaussRational GaussRational::rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return GaussRational(q);
}

GaussRational GaussRational::inverse() const {
  if (is_zero()) throw std::domain_error("GaussRational: division by zero");
  mpq_class m = mag2();
  return GaussRational(re_ / m, -im_ / m);
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) { return *this *= o.inverse(); }

std::string rational_str(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '/' && ch != '-')
      throw std::invalid_argument("parse_rational: bad character in '" + s + "'");
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("parse_rational: malformed '" + s + "'");
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("parse_rational: zero denominator");
  q.canonicalize();
  return q;
}

namespace {

// One additive part of the printed form: a rational, "i", "-i", or "<rat>*i".
// Returns true if the part was imaginary.
bool parse_part(const std::string& part, mpq_class* re, mpq_class* im) {
  if (part == "i") {
    *im += 1;
    return true;
  }
  if (part == "-i") {
    *im -= 1;
    return true;
  }
  auto star = part.find('*');
  if (star != std::string::npos) {
    if (part.substr(star + 1) != "i")
      throw std::invalid_argument("GaussRational::parse: malformed '" + part + "'");
    *im += parse_rational(part.substr(0, star));
    return true;
  }
  *re += parse_rational(part);
  return false;
}

}  // namespace

GaussRational GaussRational::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("GaussRational::parse: empty string");
  // Split into at most two additive parts at a '+' or '-' that is not the
  // leading sign and not a '/'-internal sign (which cannot occur: the printer
  // never emits "1/-2").
  std::vector<std::string> parts;
  size_t start = 0;
  for (size_t pos = 1; pos < s.size(); ++pos) {
    if (s[pos] == '+' || s[pos] == '-') {
      parts.push_back(s.substr(start, pos - start));
      start = s[pos] == '+' ? pos + 1 : pos;  // keep '-' with the next part
    }
  }
  parts.push_back(s.substr(start));
  if (parts.size() > 2) throw std::invalid_argument("GaussRational::parse: malformed '" + s + "'");
  mpq_class re(0), im(0);
  bool seen_im = false;
  for (const auto& part : parts) {
    if (part.empty()) throw std::invalid_argument("GaussRational::parse: malformed '" + s + "'");
    bool was_im = parse_part(part, &re, &im);
    if (was_im && seen_im) throw std::invalid_argument("GaussRational::parse: two imaginary parts");
    seen_im = seen_im || was_im;
  }
  if (parts.size() == 2 && !seen_im)
    throw std::invalid_argument("GaussRational::parse: two real parts");
  return GaussRational(re, im);
}

std::string GaussRational::str() const {
  if (is_zero()) return "0";
  std::string out;
  if (sgn(re_) != 0) out = rational_str(re_);
  if (sgn(im_) != 0) {
    mpq_class a = abs(im_);
    std::string part = (a == 1) ? "i" : rational_str(a) + "*i";
    if (out.empty())
      out = (sgn(im_) < 0 ? "-" : "") + part;
    else
      out += (sgn(im_) < 0 ? "-" : "+") + part;
  }
  return out;
}

std::string decimal_prefix(const mpq_class& x, int digits) {
  if (digits < 0) throw std::invalid_argument("decimal_prefix: negative digits");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class scaled;
  // floor division of num*scale by den
  mpz_class num = x.get_num() * scale;
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
  bool neg = sgn(scaled) < 0;
  mpz_class a = abs(scaled);
  std::string s = a.get_str();
  if (digits == 0) return (neg ? "-" : "") + s;
  if (s.size() <= static_cast<size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return (neg ? "-" : "") + s;
}

}  // namespace loopq
