#include "loopq/weyl.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace loopq::weyl {

namespace {

int parity_sign(int d) { return ((d % 2) + 2) % 2 == 0 ? 1 : -1; }

}  // namespace

MatN::MatN(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("MatN: dimension must be >= 1");
  e_.resize(static_cast<size_t>(n) * n);
}

MatN MatN::identity(int n) {
  MatN m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

bool MatN::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const Scalar& s) { return s.is_zero(); });
}

MatN MatN::transpose() const {
  MatN r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  return r;
}

MatN MatN::operator-() const {
  MatN r(n_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = -e_[k];
  return r;
}

MatN& MatN::operator+=(const MatN& o) {
  if (o.n_ != n_) throw std::invalid_argument("MatN: dimension mismatch");
  for (size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

MatN& MatN::operator-=(const MatN& o) {
  if (o.n_ != n_) throw std::invalid_argument("MatN: dimension mismatch");
  for (size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

MatN operator*(const MatN& a, const MatN& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("MatN: dimension mismatch");
  MatN r(a.n_);
  for (int i = 0; i < a.n_; ++i)
    for (int j = 0; j < a.n_; ++j) {
      Scalar acc;
      for (int k = 0; k < a.n_; ++k) acc += a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

MatN operator*(const Scalar& c, const MatN& m) {
  MatN r(m.n_);
  for (size_t k = 0; k < m.e_.size(); ++k) r.e_[k] = c * m.e_[k];
  return r;
}

LaurentEndo::LaurentEndo(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("LaurentEndo: dimension must be >= 1");
}

void LaurentEndo::set_coeff(int d, const MatN& m) {
  if (m.dim() != dim_) throw std::invalid_argument("LaurentEndo: dimension mismatch");
  if (m.is_zero())
    c_.erase(d);
  else
    c_.insert_or_assign(d, m);
}

MatN LaurentEndo::coeff(int d) const {
  auto it = c_.find(d);
  return it == c_.end() ? MatN(dim_) : it->second;
}

LaurentEndo& LaurentEndo::operator+=(const LaurentEndo& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("LaurentEndo: dimension mismatch");
  for (const auto& [d, m] : o.c_) set_coeff(d, coeff(d) + m);
  return *this;
}

LaurentEndo& LaurentEndo::operator-=(const LaurentEndo& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("LaurentEndo: dimension mismatch");
  for (const auto& [d, m] : o.c_) set_coeff(d, coeff(d) - m);
  return *this;
}

LaurentEndo operator*(const LaurentEndo& a, const LaurentEndo& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("LaurentEndo: dimension mismatch");
  LaurentEndo r(a.dim_);
  for (const auto& [da, ma] : a.c_)
    for (const auto& [db, mb] : b.c_) r.set_coeff(da + db, r.coeff(da + db) + ma * mb);
  return r;
}

bool is_infinitesimal_symplectic(const LaurentEndo& A) {
  for (const auto& [d, m] : A.coeffs()) {
    MatN lhs = parity_sign(d) == 1 ? m.transpose() : -m.transpose();
    lhs += m;
    if (!lhs.is_zero()) return false;
  }
  return true;
}

LaurentEndo endo_commutator(const LaurentEndo& a, const LaurentEndo& b) { return a * b - b * a; }

LaurentVector LaurentVector::basis(int dim, int index, int power) {
  LaurentVector v(dim);
  v.add_component(power, index, Scalar(1));
  return v;
}

void LaurentVector::add_component(int power, int index, const Scalar& v) {
  if (index < 0 || index >= dim_) throw std::invalid_argument("LaurentVector: index out of range");
  auto& vec = c_[power];
  if (vec.empty()) vec.resize(static_cast<size_t>(dim_));
  vec[static_cast<size_t>(index)] += v;
}

LaurentVector apply(const LaurentEndo& A, const LaurentVector& f) {
  if (A.dim() != f.dim()) throw std::invalid_argument("apply: dimension mismatch");
  LaurentVector out(f.dim());
  for (const auto& [d, m] : A.coeffs())
    for (const auto& [p, vec] : f.components())
      for (int i = 0; i < f.dim(); ++i) {
        if (vec[static_cast<size_t>(i)].is_zero()) continue;
        for (int a = 0; a < f.dim(); ++a) {
          const Scalar& entry = m.at(a, i);
          if (!entry.is_zero()) out.add_component(d + p, a, entry * vec[static_cast<size_t>(i)]);
        }
      }
  return out;
}

Scalar omega(const LaurentVector& f, const LaurentVector& g, const MatN& metric) {
  if (f.dim() != g.dim() || metric.dim() != f.dim())
    throw std::invalid_argument("omega: dimension mismatch");
  Scalar acc;
  for (const auto& [d1, u] : f.components()) {
    auto it = g.components().find(-1 - d1);
    if (it == g.components().end()) continue;
    const auto& v = it->second;
    Scalar inner;
    for (int a = 0; a < f.dim(); ++a) {
      if (u[static_cast<size_t>(a)].is_zero()) continue;
      for (int b = 0; b < f.dim(); ++b)
        inner += u[static_cast<size_t>(a)] * metric.at(a, b) * v[static_cast<size_t>(b)];
    }
    acc += Scalar(mpq_class(parity_sign(d1))) * inner;
  }
  return acc;
}

Scalar omega(const LaurentVector& f, const LaurentVector& g) {
  return omega(f, g, MatN::identity(f.dim()));
}

DarbouxPolynomial DarbouxPolynomial::variable(const DarbouxVar& v) {
  DarbouxPolynomial p;
  p.add_term({v}, Scalar(1));
  return p;
}

void DarbouxPolynomial::add_term(std::vector<DarbouxVar> mono, const Scalar& c) {
  if (c.is_zero()) return;
  std::sort(mono.begin(), mono.end());
  auto [it, inserted] = t_.emplace(std::move(mono), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

int DarbouxPolynomial::degree() const {
  int deg = 0;
  for (const auto& [mono, c] : t_) deg = std::max(deg, static_cast<int>(mono.size()));
  return deg;
}

DarbouxPolynomial DarbouxPolynomial::operator-() const {
  DarbouxPolynomial r;
  for (const auto& [mono, c] : t_) r.t_.emplace(mono, -c);
  return r;
}

DarbouxPolynomial& DarbouxPolynomial::operator+=(const DarbouxPolynomial& o) {
  for (const auto& [mono, c] : o.t_) add_term(mono, c);
  return *this;
}

DarbouxPolynomial& DarbouxPolynomial::operator-=(const DarbouxPolynomial& o) {
  for (const auto& [mono, c] : o.t_) add_term(mono, -c);
  return *this;
}

DarbouxPolynomial operator*(const DarbouxPolynomial& a, const DarbouxPolynomial& b) {
  DarbouxPolynomial r;
  for (const auto& [ma, ca] : a.t_)
    for (const auto& [mb, cb] : b.t_) {
      std::vector<DarbouxVar> mono = ma;
      mono.insert(mono.end(), mb.begin(), mb.end());
      r.add_term(std::move(mono), ca * cb);
    }
  return r;
}

DarbouxPolynomial operator*(const Scalar& c, const DarbouxPolynomial& p) {
  DarbouxPolynomial r;
  if (c.is_zero()) return r;
  for (const auto& [mono, coeff] : p.t_) r.t_.emplace(mono, c * coeff);
  return r;
}

DarbouxPolynomial DarbouxPolynomial::derivative(const DarbouxVar& v) const {
  DarbouxPolynomial r;
  for (const auto& [mono, c] : t_) {
    auto lo = std::lower_bound(mono.begin(), mono.end(), v);
    if (lo == mono.end() || *lo != v) continue;
    auto hi = std::upper_bound(mono.begin(), mono.end(), v);
    long mult = hi - lo;
    std::vector<DarbouxVar> rest(mono.begin(), lo);
    rest.insert(rest.end(), lo + 1, mono.end());
    r.add_term(std::move(rest), Scalar(mpq_class(mult)) * c);
  }
  return r;
}

DarbouxPolynomial DarbouxPolynomial::filter_max_level(int K) const {
  DarbouxPolynomial r;
  for (const auto& [mono, c] : t_) {
    bool keep = std::all_of(mono.begin(), mono.end(),
                            [K](const DarbouxVar& v) { return v.level <= K; });
    if (keep) r.t_.emplace(mono, c);
  }
  return r;
}

std::string DarbouxPolynomial::str() const {
  if (t_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mono, c] : t_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.str() << ")";
    for (const auto& v : mono)
      out << (v.kind == VarKind::Q ? "*q[" : "*p[") << v.basis << "," << v.level << "]";
  }
  return out.str();
}

DarbouxPolynomial poisson_bracket(const DarbouxPolynomial& a, const DarbouxPolynomial& b) {
  // {a, b} = sum_v da/dp_v db/dq_v - db/dp_v da/dq_v over all (basis, level).
  std::vector<std::pair<int, int>> slots;
  auto collect = [&slots](const DarbouxPolynomial& p) {
    for (const auto& [mono, c] : p.terms())
      for (const auto& v : mono) slots.emplace_back(v.basis, v.level);
  };
  collect(a);
  collect(b);
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  DarbouxPolynomial r;
  for (const auto& [basis, level] : slots) {
    DarbouxVar p{VarKind::P, basis, level};
    DarbouxVar q{VarKind::Q, basis, level};
    r += a.derivative(p) * b.derivative(q);
    r -= b.derivative(p) * a.derivative(q);
  }
  return r;
}

HamiltonianResult hamiltonian_of(const LaurentEndo& A, int K) {
  if (K < 0) throw std::invalid_argument("hamiltonian_of: negative level cutoff");
  if (!is_infinitesimal_symplectic(A))
    throw std::invalid_argument("hamiltonian_of: endomorphism is not infinitesimal symplectic");
  int N = A.dim();
  HamiltonianResult res;
  const Scalar half(mpq_class(1, 2));
  // P(A) = (1/2) sum_{V,W} Omega(A e_V, e_W) x_V x_W. Each power component of
  // A e_V pairs against exactly one dual variable W: power d >= 0 pairs with
  // p_d (factor -1), power d < 0 pairs with q_{-1-d} (factor (-1)^d).
  for (int level = 0; level <= K; ++level) {
    for (int i = 0; i < N; ++i) {
      for (VarKind kind : {VarKind::Q, VarKind::P}) {
        DarbouxVar xv{kind, i, level};
        // e_V = phi_i z^level for Q, (-1)^(level+1) phi_i z^(-level-1) for P.
        int base_power = kind == VarKind::Q ? level : -level - 1;
        Scalar base_coeff =
            kind == VarKind::Q ? Scalar(1) : Scalar(mpq_class(parity_sign(level + 1)));
        for (const auto& [d, m] : A.coeffs()) {
          int power = base_power + d;
          for (int a = 0; a < N; ++a) {
            Scalar comp = base_coeff * m.at(a, i);
            if (comp.is_zero()) continue;
            DarbouxVar xw{};
            Scalar pairing;
            if (power >= 0) {
              xw = DarbouxVar{VarKind::P, a, power};
              pairing = Scalar(-1);
            } else {
              xw = DarbouxVar{VarKind::Q, a, -1 - power};
              pairing = Scalar(mpq_class(parity_sign(power)));
            }
            if (xw.level > K) {
              res.truncated = true;
              continue;
            }
            res.poly.add_term({xv, xw}, half * comp * pairing);
          }
        }
      }
    }
  }
  return res;
}

void FockOperator::add_term(FockTermKey key, const Scalar& c) {
  if (c.is_zero()) return;
  std::sort(key.qs.begin(), key.qs.end());
  std::sort(key.ds.begin(), key.ds.end());
  auto [it, inserted] = t_.emplace(std::move(key), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

bool FockOperator::is_scalar() const {
  for (const auto& [key, c] : t_)
    if (!key.qs.empty() || !key.ds.empty() || key.hbar != 0) return false;
  return true;
}

Scalar FockOperator::scalar_part() const {
  auto it = t_.find(FockTermKey{});
  return it == t_.end() ? Scalar(0) : it->second;
}

FockOperator FockOperator::operator-() const {
  FockOperator r;
  for (const auto& [key, c] : t_) r.t_.emplace(key, -c);
  return r;
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  for (const auto& [key, c] : o.t_) add_term(key, c);
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
  for (const auto& [key, c] : o.t_) add_term(key, -c);
  return *this;
}

FockOperator operator*(const Scalar& c, const FockOperator& op) {
  FockOperator r;
  if (c.is_zero()) return r;
  for (const auto& [key, coeff] : op.t_) r.t_.emplace(key, c * coeff);
  return r;
}

namespace {

mpz_class binomial(int n, int k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

mpz_class factorial_z(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

// Multiplicity map of a sorted multiset.
std::map<FockVar, int> counts(const std::vector<FockVar>& vs) {
  std::map<FockVar, int> m;
  for (const auto& v : vs) ++m[v];
  return m;
}

void append_copies(std::vector<FockVar>& out, const FockVar& v, int n) {
  for (int k = 0; k < n; ++k) out.push_back(v);
}

}  // namespace

FockOperator op_compose(const FockOperator& a, const FockOperator& b) {
  FockOperator out;
  for (const auto& [ka, ca] : a.terms()) {
    auto da = counts(ka.ds);
    for (const auto& [kb, cb] : b.terms()) {
      auto qb = counts(kb.qs);
      // Normal-order prod_d(a) against prod_q(b): per shared variable v with
      // multiplicities (bv, gv), contracting k pairs contributes
      // k! C(bv, k) C(gv, k).
      std::vector<std::pair<FockVar, std::pair<int, int>>> shared;
      for (const auto& [v, bv] : da) {
        auto it = qb.find(v);
        if (it != qb.end()) shared.emplace_back(v, std::make_pair(bv, it->second));
      }
      std::vector<int> pick(shared.size(), 0);
      std::function<void(size_t, const mpz_class&)> rec = [&](size_t idx, const mpz_class& weight) {
        if (idx == shared.size()) {
          FockTermKey key;
          key.hbar = ka.hbar + kb.hbar;
          key.qs = ka.qs;
          key.ds = kb.ds;
          // Survivors: b's q factors and a's derivatives minus contractions.
          std::map<FockVar, int> qrem = qb;
          std::map<FockVar, int> drem = da;
          for (size_t s = 0; s < shared.size(); ++s) {
            qrem[shared[s].first] -= pick[s];
            drem[shared[s].first] -= pick[s];
          }
          for (const auto& [v, n] : qrem) append_copies(key.qs, v, n);
          for (const auto& [v, n] : drem) append_copies(key.ds, v, n);
          out.add_term(std::move(key), ca * cb * Scalar(mpq_class(weight)));
          return;
        }
        auto [bv, gv] = shared[idx].second;
        int top = std::min(bv, gv);
        for (int k = 0; k <= top; ++k) {
          mpz_class w = weight * factorial_z(k) * binomial(bv, k) * binomial(gv, k);
          pick[idx] = k;
          rec(idx + 1, w);
        }
        pick[idx] = 0;
      };
      rec(0, mpz_class(1));
    }
  }
  return out;
}

FockOperator op_commutator(const FockOperator& a, const FockOperator& b) {
  return op_compose(a, b) - op_compose(b, a);
}

FockOperator quantize(const DarbouxPolynomial& P) {
  FockOperator out;
  for (const auto& [mono, c] : P.terms()) {
    FockTermKey key;
    if (mono.empty()) {
      out.add_term(std::move(key), c);
      continue;
    }
    if (mono.size() != 2)
      throw std::invalid_argument(
          "quantize: only even-degree monomials of degree <= 2 are quantizable");
    for (const auto& v : mono) {
      if (v.kind == VarKind::Q)
        key.qs.push_back(FockVar{v.basis, v.level});
      else
        key.ds.push_back(FockVar{v.basis, v.level});
    }
    // hbar grading: qq -> -1, pq -> 0, pp -> +1.
    key.hbar = static_cast<int>(key.ds.size()) - 1;
    out.add_term(std::move(key), c);
  }
  return out;
}

FockOperator cocycle_defect(const DarbouxPolynomial& a, const DarbouxPolynomial& b) {
  return op_commutator(quantize(a), quantize(b)) - quantize(poisson_bracket(a, b));
}

std::string FockOperator::json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [key, c] : t_) {
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& v : key.qs) qs.push_back(nlohmann::json::array({v.basis, v.level}));
    nlohmann::json ds = nlohmann::json::array();
    for (const auto& v : key.ds) ds.push_back(nlohmann::json::array({v.basis, v.level}));
    terms.push_back(
        nlohmann::json{{"q", qs}, {"d", ds}, {"hbar", key.hbar}, {"coeff", c.str()}});
  }
  return nlohmann::json{{"schema", 1}, {"terms", terms}}.dump(2) + "\n";
}

std::string FockOperator::str() const {
  if (t_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, c] : t_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.str() << ")";
    if (key.hbar != 0) out << "*h^" << key.hbar;
    for (const auto& v : key.qs) out << "*q[" << v.basis << "," << v.level << "]";
    for (const auto& v : key.ds) out << "*d[" << v.basis << "," << v.level << "]";
  }
  return out.str();
}

namespace {

void validate_family(const LaurentEndo& e, bool negative, const char* who) {
  if (!is_infinitesimal_symplectic(e))
    throw std::invalid_argument(std::string(who) + ": endomorphism is not infinitesimal symplectic");
  for (const auto& [d, m] : e.coeffs()) {
    if (negative && d >= 0)
      throw std::invalid_argument(std::string(who) + ": powers must be strictly negative");
    if (!negative && d <= 0)
      throw std::invalid_argument(std::string(who) + ": powers must be strictly positive");
  }
}

}  // namespace

OperatorResult construct_s_hat(const LaurentEndo& s, int K) {
  if (K < 0) throw std::invalid_argument("construct_s_hat: negative level cutoff");
  validate_family(s, /*negative=*/true, "construct_s_hat");
  int N = s.dim();
  OperatorResult res;
  const Scalar minus_half(mpq_class(-1, 2));
  for (const auto& [d, m] : s.coeffs()) {
    int l = -d;
    res.truncated = true;  // the q{l+n} d/dq{n} tower always exceeds any cutoff
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const Scalar& sij = m.at(i, j);
        if (sij.is_zero()) continue;
        for (int n = 0; n + l <= K; ++n) {
          FockTermKey key;
          key.qs.push_back(FockVar{j, l + n});
          key.ds.push_back(FockVar{i, n});
          res.op.add_term(std::move(key), -sij);
        }
        for (int n = 0; n <= l - 1; ++n) {
          if (n > K || l - n - 1 > K) {
            res.truncated = true;
            continue;
          }
          FockTermKey key;
          key.qs.push_back(FockVar{i, n});
          key.qs.push_back(FockVar{j, l - n - 1});
          key.hbar = -1;
          Scalar c = minus_half * sij;
          if (n % 2 == 1) c = -c;
          res.op.add_term(std::move(key), c);
        }
      }
  }
  return res;
}

OperatorResult construct_r_hat(const LaurentEndo& r, int K) {
  if (K < 0) throw std::invalid_argument("construct_r_hat: negative level cutoff");
  validate_family(r, /*negative=*/false, "construct_r_hat");
  int N = r.dim();
  OperatorResult res;
  const Scalar half(mpq_class(1, 2));
  for (const auto& [d, m] : r.coeffs()) {
    int l = d;
    res.truncated = true;  // the q{n} d/dq{n+l} tower always exceeds any cutoff
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const Scalar& rij = m.at(i, j);
        if (rij.is_zero()) continue;
        for (int n = 0; n + l <= K; ++n) {
          FockTermKey key;
          key.qs.push_back(FockVar{j, n});
          key.ds.push_back(FockVar{i, n + l});
          res.op.add_term(std::move(key), -rij);
        }
        for (int mm = 0; mm <= l - 1; ++mm) {
          if (mm > K || l - 1 - mm > K) {
            res.truncated = true;
            continue;
          }
          FockTermKey key;
          key.ds.push_back(FockVar{i, l - 1 - mm});
          key.ds.push_back(FockVar{j, mm});
          key.hbar = 1;
          Scalar c = half * rij;
          if (mm % 2 == 1) c = -c;
          res.op.add_term(std::move(key), c);
        }
      }
  }
  return res;
}

}  // namespace loopq::weyl
