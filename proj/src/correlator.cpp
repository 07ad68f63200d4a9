#include "loopq/correlator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace loopq::corr {

mpz_class KappaPolynomial::mass() const {
  mpz_class total = 0;
  for (const auto& [mono, c] : terms) total += c;
  return total;
}

namespace {

// Print order: monomials with more factors first, then lexicographic.
std::vector<std::pair<std::vector<int>, mpz_class>> kappa_print_order(const KappaPolynomial& k) {
  std::vector<std::pair<std::vector<int>, mpz_class>> out(k.terms.begin(), k.terms.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  return out;
}

}  // namespace

std::string KappaPolynomial::str() const {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mono, c] : kappa_print_order(*this)) {
    if (!first) out << " + ";
    first = false;
    if (c != 1 || mono.empty()) out << c.get_str();
    for (int a : mono) out << "k[" << a << "]";
  }
  return out.str();
}

std::string KappaPolynomial::json() const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const auto& [mono, c] : kappa_print_order(*this))
    terms_json.push_back(nlohmann::json{{"indices", mono}, {"coeff", c.get_str()}});
  return nlohmann::json{{"schema", 1}, {"terms", terms_json}}.dump(2) + "\n";
}

KappaPolynomial kappa_pushforward(const std::vector<int>& ks) {
  for (int k : ks)
    if (k < 0) throw std::invalid_argument("kappa_pushforward: negative index");
  int l = static_cast<int>(ks.size());
  std::vector<int> perm(ks.size());
  for (int i = 0; i < l; ++i) perm[static_cast<size_t>(i)] = i;
  KappaPolynomial out;
  do {
    std::vector<bool> visited(ks.size(), false);
    std::vector<int> mono;
    for (int start = 0; start < l; ++start) {
      if (visited[static_cast<size_t>(start)]) continue;
      int sum = 0;
      int at = start;
      while (!visited[static_cast<size_t>(at)]) {
        visited[static_cast<size_t>(at)] = true;
        sum += ks[static_cast<size_t>(at)];
        at = perm[static_cast<size_t>(at)];
      }
      mono.push_back(sum);
    }
    std::sort(mono.begin(), mono.end());
    out.terms[mono] += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::string Genus::str() const {
  if (!symbolic) return std::to_string(value);
  if (value == 0) return "g";
  return value > 0 ? "g+" + std::to_string(value) : "g-" + std::to_string(-value);
}

std::string InsIndex::str() const {
  switch (kind) {
    case Kind::Basis:
      return std::to_string(num);
    case Kind::Free:
      return name;
    default:
      return "#" + std::to_string(num);
  }
}

namespace {

void normalize_term(TermKey& key) {
  for (auto& sym : key.symbols) std::sort(sym.ins.begin(), sym.ins.end());
  std::sort(key.symbols.begin(), key.symbols.end());
  std::sort(key.qs.begin(), key.qs.end());
}

std::set<int> glue_labels(const TermKey& key) {
  std::set<int> labels;
  for (const auto& sym : key.symbols)
    for (const auto& ins : sym.ins)
      if (ins.idx.kind == InsIndex::Kind::Glue) labels.insert(ins.idx.num);
  return labels;
}

TermKey relabel(const TermKey& key, const std::map<int, int>& mapping) {
  TermKey out = key;
  for (auto& sym : out.symbols)
    for (auto& ins : sym.ins)
      if (ins.idx.kind == InsIndex::Kind::Glue) ins.idx.num = mapping.at(ins.idx.num);
  return out;
}

}  // namespace

TermKey canonical_term(TermKey key) {
  normalize_term(key);
  std::set<int> labels = glue_labels(key);
  if (labels.empty()) return key;
  std::vector<int> old_labels(labels.begin(), labels.end());
  size_t m = old_labels.size();
  if (m > 6) {
    // Too many labels for exhaustive search; renumber by ascending old label.
    std::map<int, int> mapping;
    for (size_t t = 0; t < m; ++t) mapping[old_labels[t]] = static_cast<int>(t) + 1;
    TermKey out = relabel(key, mapping);
    normalize_term(out);
    return out;
  }
  std::vector<int> perm(m);
  for (size_t t = 0; t < m; ++t) perm[t] = static_cast<int>(t) + 1;
  TermKey best;
  bool have_best = false;
  do {
    std::map<int, int> mapping;
    for (size_t t = 0; t < m; ++t) mapping[old_labels[t]] = perm[t];
    TermKey cand = relabel(key, mapping);
    normalize_term(cand);
    if (!have_best || cand < best) {
      best = std::move(cand);
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

CorrelatorExpression CorrelatorExpression::term(TermKey key, const Scalar& c) {
  CorrelatorExpression e;
  e.add_term(std::move(key), c);
  return e;
}

void CorrelatorExpression::add_term(TermKey key, const Scalar& c) {
  if (c.is_zero()) return;
  TermKey canon = canonical_term(std::move(key));
  auto [it, inserted] = t_.emplace(std::move(canon), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

CorrelatorExpression CorrelatorExpression::operator-() const {
  CorrelatorExpression r;
  for (const auto& [key, c] : t_) r.t_.emplace(key, -c);
  return r;
}

CorrelatorExpression& CorrelatorExpression::operator+=(const CorrelatorExpression& o) {
  for (const auto& [key, c] : o.t_) {
    auto [it, inserted] = t_.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  return *this;
}

CorrelatorExpression& CorrelatorExpression::operator-=(const CorrelatorExpression& o) {
  for (const auto& [key, c] : o.t_) {
    auto [it, inserted] = t_.emplace(key, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  return *this;
}

CorrelatorExpression operator*(const Scalar& c, const CorrelatorExpression& e) {
  CorrelatorExpression r;
  if (c.is_zero()) return r;
  for (const auto& [key, coeff] : e.t_) r.t_.emplace(key, c * coeff);
  return r;
}

CorrelatorExpression operator*(const CorrelatorExpression& a, const CorrelatorExpression& b) {
  CorrelatorExpression r;
  for (const auto& [ka, ca] : a.t_) {
    std::set<int> la = glue_labels(ka);
    int shift = la.empty() ? 0 : *la.rbegin();
    for (const auto& [kb, cb] : b.t_) {
      TermKey key = ka;
      for (const auto& qf : kb.qs) key.qs.push_back(qf);
      for (const auto& sym : kb.symbols) {
        Symbol copy = sym;
        for (auto& ins : copy.ins)
          if (ins.idx.kind == InsIndex::Kind::Glue) ins.idx.num += shift;
        key.symbols.push_back(std::move(copy));
      }
      r.add_term(std::move(key), ca * cb);
    }
  }
  return r;
}

namespace {

// Coefficient with the leading sign stripped; complex values with both parts
// are parenthesized so every factor stays a single token.
std::string coeff_token(const Scalar& mag) {
  if (mag.im() == 0) return rational_str(mag.re());
  if (mag.re() == 0) return mag.im() == 1 ? "i" : rational_str(mag.im()) + "*i";
  return "(" + mag.str() + ")";
}

bool coeff_negative(const Scalar& c) { return c.re() != 0 ? c.re() < 0 : c.im() < 0; }

std::string insertion_str(const Insertion& ins) {
  std::string out = std::to_string(ins.desc);
  if (ins.anc != 0) out += "~" + std::to_string(ins.anc);
  return out + " " + ins.idx.str();
}

std::string symbol_str(const Symbol& sym) {
  std::string out = "<";
  for (size_t a = 0; a < sym.ins.size(); ++a) {
    if (a) out += " | ";
    out += insertion_str(sym.ins[a]);
  }
  return out + ">_" + sym.genus.str();
}

}  // namespace

std::string CorrelatorExpression::str() const {
  if (t_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, c] : t_) {
    bool neg = coeff_negative(c);
    Scalar mag = neg ? -c : c;
    std::vector<std::string> factors;
    bool bare = key.qs.empty() && key.symbols.empty();
    if (bare || !(mag == Scalar(1))) factors.push_back(coeff_token(mag));
    for (const auto& qf : key.qs)
      factors.push_back("q[" + std::to_string(qf.basis) + "," + std::to_string(qf.level) + "]");
    for (const auto& sym : key.symbols) factors.push_back(symbol_str(sym));
    if (first)
      out << (neg ? "-" : "");
    else
      out << (neg ? " - " : " + ");
    first = false;
    for (size_t f = 0; f < factors.size(); ++f) {
      if (f) out << " ";
      out << factors[f];
    }
  }
  return out.str();
}

namespace {

struct Scanner {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() const { return pos >= s.size(); }
  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
  char get() { return s[pos++]; }
  void expect(char c) {
    if (done() || s[pos] != c)
      throw std::invalid_argument("parse: expected '" + std::string(1, c) + "' at position " +
                                  std::to_string(pos));
    ++pos;
  }
  int parse_int() {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw std::invalid_argument("parse: expected integer at position " +
                                                  std::to_string(start));
    return std::stoi(s.substr(start, pos - start));
  }
};

InsIndex parse_index(Scanner& sc) {
  if (sc.peek() == '#') {
    sc.get();
    return InsIndex::glue(sc.parse_int());
  }
  if (std::isdigit(static_cast<unsigned char>(sc.peek()))) return InsIndex::basis(sc.parse_int());
  if (std::isalpha(static_cast<unsigned char>(sc.peek())) || sc.peek() == '_') {
    size_t start = sc.pos;
    while (!sc.done() && (std::isalnum(static_cast<unsigned char>(sc.peek())) || sc.peek() == '_'))
      sc.get();
    return InsIndex::free(sc.s.substr(start, sc.pos - start));
  }
  throw std::invalid_argument("parse: expected insertion index at position " +
                              std::to_string(sc.pos));
}

Symbol parse_symbol(Scanner& sc) {
  sc.expect('<');
  Symbol sym;
  while (true) {
    sc.skip_ws();
    Insertion ins;
    ins.desc = sc.parse_int();
    if (sc.peek() == '~') {
      sc.get();
      ins.anc = sc.parse_int();
    }
    sc.skip_ws();
    ins.idx = parse_index(sc);
    sym.ins.push_back(std::move(ins));
    sc.skip_ws();
    if (sc.peek() == '|') {
      sc.get();
      continue;
    }
    sc.expect('>');
    break;
  }
  sc.expect('_');
  if (sc.peek() == 'g') {
    sc.get();
    int offset = 0;
    if (sc.peek() == '+') {
      sc.get();
      offset = sc.parse_int();
    } else if (sc.peek() == '-') {
      sc.get();
      offset = -sc.parse_int();
    }
    sym.genus = Genus::formal(offset);
  } else {
    sym.genus = Genus::concrete(sc.parse_int());
  }
  return sym;
}

QFactor parse_qfactor(Scanner& sc) {
  sc.expect('q');
  sc.expect('[');
  QFactor qf;
  sc.skip_ws();
  qf.basis = sc.parse_int();
  sc.skip_ws();
  sc.expect(',');
  sc.skip_ws();
  qf.level = sc.parse_int();
  sc.skip_ws();
  sc.expect(']');
  return qf;
}

Scalar parse_coeff_token(Scanner& sc) {
  if (sc.peek() == '(') {
    sc.get();
    size_t start = sc.pos;
    while (!sc.done() && sc.peek() != ')') sc.get();
    std::string inner = sc.s.substr(start, sc.pos - start);
    sc.expect(')');
    return GaussRational::parse(inner);
  }
  size_t start = sc.pos;
  while (!sc.done() && !std::isspace(static_cast<unsigned char>(sc.peek())) && sc.peek() != '+' &&
         sc.peek() != '-' && sc.peek() != '<')
    sc.get();
  if (sc.pos == start)
    throw std::invalid_argument("parse: expected factor at position " + std::to_string(start));
  return GaussRational::parse(sc.s.substr(start, sc.pos - start));
}

}  // namespace

CorrelatorExpression CorrelatorExpression::parse(const std::string& text) {
  Scanner sc{text};
  CorrelatorExpression out;
  sc.skip_ws();
  if (sc.done()) throw std::invalid_argument("parse: empty expression");
  int sign = 1;
  if (sc.peek() == '-') {
    sign = -1;
    sc.get();
  } else if (sc.peek() == '+') {
    sc.get();
  }
  while (true) {
    TermKey key;
    Scalar coeff(sign);
    bool any = false;
    while (true) {
      sc.skip_ws();
      if (sc.done() || sc.peek() == '+' || sc.peek() == '-') break;
      if (sc.peek() == '<') {
        key.symbols.push_back(parse_symbol(sc));
      } else if (sc.peek() == 'q' && sc.pos + 1 < sc.s.size() && sc.s[sc.pos + 1] == '[') {
        key.qs.push_back(parse_qfactor(sc));
      } else {
        coeff = coeff * parse_coeff_token(sc);
      }
      any = true;
    }
    if (!any) throw std::invalid_argument("parse: empty term");
    out.add_term(std::move(key), coeff);
    sc.skip_ws();
    if (sc.done()) break;
    sign = sc.get() == '-' ? -1 : 1;
  }
  return out;
}

std::string CorrelatorExpression::json() const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const auto& [key, c] : t_) {
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& qf : key.qs) qs.push_back(nlohmann::json::array({qf.basis, qf.level}));
    nlohmann::json symbols = nlohmann::json::array();
    for (const auto& sym : key.symbols) {
      nlohmann::json ins = nlohmann::json::array();
      for (const auto& in : sym.ins) {
        nlohmann::json idx;
        if (in.idx.kind == InsIndex::Kind::Basis)
          idx = in.idx.num;
        else
          idx = in.idx.str();
        ins.push_back(nlohmann::json{{"desc", in.desc}, {"anc", in.anc}, {"index", idx}});
      }
      symbols.push_back(nlohmann::json{{"genus", sym.genus.str()}, {"insertions", ins}});
    }
    terms_json.push_back(nlohmann::json{{"coeff", c.str()}, {"q", qs}, {"symbols", symbols}});
  }
  return nlohmann::json{{"schema", 1}, {"terms", terms_json}}.dump(2) + "\n";
}

MatrixFamily::MatrixFamily(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("MatrixFamily: rank must be >= 1");
}

void MatrixFamily::set(int l, const weyl::MatN& m) {
  if (l < 1) throw std::invalid_argument("MatrixFamily: levels start at 1");
  if (m.dim() != dim_) throw std::invalid_argument("MatrixFamily: rank mismatch");
  if (m.is_zero())
    c_.erase(l);
  else
    c_.insert_or_assign(l, m);
}

weyl::MatN MatrixFamily::at(int l) const {
  auto it = c_.find(l);
  return it == c_.end() ? weyl::MatN(dim_) : it->second;
}

CorrelatorExpression descendent_to_ancestor(int k, int lbar, int r,
                                            const std::vector<Insertion>& tail, Genus g,
                                            const InsIndex& lead) {
  if (k < 0 || lbar < 0) throw std::invalid_argument("descendent_to_ancestor: negative power");
  if (r < 0 || r > lbar)
    throw std::invalid_argument("descendent_to_ancestor: need 0 <= r <= ancestor power");
  int base = 0;
  for (const auto& ins : tail)
    if (ins.idx.kind == InsIndex::Kind::Glue) base = std::max(base, ins.idx.num);

  CorrelatorExpression out;
  {
    TermKey key;
    Symbol sym{g, tail};
    sym.ins.push_back(Insertion{k + r, lbar - r, lead});
    key.symbols.push_back(std::move(sym));
    out.add_term(std::move(key), Scalar(1));
  }
  for (int p = 1; p <= r; ++p) {
    Scalar sign(p % 2 == 1 ? -1 : 1);
    std::vector<int> js(static_cast<size_t>(p) + 1, 0);
    std::function<void(int, int)> emit = [&](int slot, int remaining) {
      if (slot == p) {
        js[static_cast<size_t>(p)] = remaining;
        TermKey key;
        {
          Symbol head{Genus::concrete(0), {}};
          head.ins.push_back(Insertion{k + js[0], 0, lead});
          head.ins.push_back(Insertion{0, 0, InsIndex::glue(base + 1)});
          key.symbols.push_back(std::move(head));
        }
        for (int t = 1; t < p; ++t) {
          Symbol link{Genus::concrete(0), {}};
          link.ins.push_back(Insertion{js[static_cast<size_t>(t)], 0, InsIndex::glue(base + t)});
          link.ins.push_back(Insertion{0, 0, InsIndex::glue(base + t + 1)});
          key.symbols.push_back(std::move(link));
        }
        {
          Symbol last{g, tail};
          last.ins.push_back(
              Insertion{js[static_cast<size_t>(p)], lbar - r, InsIndex::glue(base + p)});
          key.symbols.push_back(std::move(last));
        }
        out.add_term(std::move(key), sign);
        return;
      }
      for (int j = 0; j <= remaining; ++j) {
        js[static_cast<size_t>(slot)] = j;
        emit(slot + 1, remaining - j);
      }
    };
    emit(0, r - p);
  }
  return out;
}

namespace {

void validate_action_input(const CorrelatorExpression& e, int rank, bool genus0_two_point_rule,
                           const char* who) {
  for (const auto& [key, c] : e.terms()) {
    for (const auto& sym : key.symbols) {
      if (sym.genus.symbolic)
        throw std::invalid_argument(std::string(who) + ": concrete genus required");
      for (const auto& ins : sym.ins) {
        if (ins.anc != 0)
          throw std::invalid_argument(std::string(who) + ": ancestor powers must be zero");
        if (ins.idx.kind != InsIndex::Kind::Basis)
          throw std::invalid_argument(std::string(who) + ": concrete basis indices required");
        if (ins.idx.num >= rank)
          throw std::invalid_argument(std::string(who) + ": insertion index exceeds family rank");
      }
      if (genus0_two_point_rule && sym.genus.value == 0 && sym.ins.size() < 2)
        throw std::invalid_argument(std::string(who) +
                                    ": genus-0 symbol needs at least two insertions");
    }
  }
}

}  // namespace

CorrelatorExpression apply_s_action(const CorrelatorExpression& e, const MatrixFamily& s,
                                    int q_level_cutoff) {
  if (q_level_cutoff < 0) throw std::invalid_argument("apply_s_action: negative level cutoff");
  validate_action_input(e, s.dim(), /*genus0_two_point_rule=*/true, "apply_s_action");
  int N = s.dim();
  const Scalar half(mpq_class(1, 2));
  CorrelatorExpression out;
  for (const auto& [key, coeff] : e.terms()) {
    for (size_t a = 0; a < key.symbols.size(); ++a) {
      const Symbol& sym = key.symbols[a];
      for (const auto& [l, mat] : s.entries()) {
        // q-shift: (s_l)_{ij} q[j, l+n] <d^i_n ...>
        for (int n = 0; l + n <= q_level_cutoff; ++n)
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
              const Scalar& c = mat.at(i, j);
              if (c.is_zero()) continue;
              TermKey nk = key;
              nk.symbols[a].ins.push_back(Insertion{n, 0, InsIndex::basis(i)});
              nk.qs.push_back(QFactor{j, l + n});
              out.add_term(std::move(nk), coeff * c);
            }
        // lowering: (s_l)_{i i_a} sends k_a to k_a - l, vanishing below zero
        for (size_t pos = 0; pos < sym.ins.size(); ++pos) {
          if (sym.ins[pos].desc < l) continue;
          int ia = sym.ins[pos].idx.num;
          for (int i = 0; i < N; ++i) {
            const Scalar& c = mat.at(i, ia);
            if (c.is_zero()) continue;
            TermKey nk = key;
            nk.symbols[a].ins[pos] = Insertion{sym.ins[pos].desc - l, 0, InsIndex::basis(i)};
            out.add_term(std::move(nk), coeff * c);
          }
        }
      }
      // two-insertion genus-0 contribution
      if (sym.genus.value == 0 && sym.ins.size() == 2) {
        int k1 = sym.ins[0].desc, k2 = sym.ins[1].desc;
        int i1 = sym.ins[0].idx.num, i2 = sym.ins[1].idx.num;
        weyl::MatN mat = s.at(k1 + k2 + 1);
        Scalar val = half * (Scalar(k1 % 2 == 0 ? 1 : -1) * mat.at(i1, i2) +
                             Scalar(k2 % 2 == 0 ? 1 : -1) * mat.at(i2, i1));
        if (!val.is_zero()) {
          TermKey nk = key;
          nk.symbols.erase(nk.symbols.begin() + static_cast<long>(a));
          out.add_term(std::move(nk), coeff * val);
        }
      }
    }
  }
  return out;
}

CorrelatorExpression apply_r_action(const CorrelatorExpression& e, const MatrixFamily& r,
                                    int q_level_cutoff) {
  if (q_level_cutoff < 0) throw std::invalid_argument("apply_r_action: negative level cutoff");
  validate_action_input(e, r.dim(), /*genus0_two_point_rule=*/false, "apply_r_action");
  int N = r.dim();
  const Scalar half(mpq_class(1, 2));
  CorrelatorExpression out;
  for (const auto& [key, coeff] : e.terms()) {
    for (size_t a = 0; a < key.symbols.size(); ++a) {
      const Symbol& sym = key.symbols[a];
      int g = sym.genus.value;
      for (const auto& [l, mat] : r.entries()) {
        // q-shift: (r_l)_{ij} q[j, n] <d^i_{n+l} ...>
        for (int n = 0; n <= q_level_cutoff; ++n)
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
              const Scalar& c = mat.at(i, j);
              if (c.is_zero()) continue;
              TermKey nk = key;
              nk.symbols[a].ins.push_back(Insertion{n + l, 0, InsIndex::basis(i)});
              nk.qs.push_back(QFactor{j, n});
              out.add_term(std::move(nk), coeff * c);
            }
        // raising: (r_l)_{i i_a} sends k_a to k_a + l
        for (size_t pos = 0; pos < sym.ins.size(); ++pos) {
          int ia = sym.ins[pos].idx.num;
          for (int i = 0; i < N; ++i) {
            const Scalar& c = mat.at(i, ia);
            if (c.is_zero()) continue;
            TermKey nk = key;
            nk.symbols[a].ins[pos] = Insertion{sym.ins[pos].desc + l, 0, InsIndex::basis(i)};
            out.add_term(std::move(nk), coeff * c);
          }
        }
        for (int m = 0; m <= l - 1; ++m) {
          Scalar w = half * Scalar(m % 2 == 0 ? -1 : 1);  // (1/2)(-1)^(m+1)
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
              const Scalar& c = mat.at(i, j);
              if (c.is_zero()) continue;
              // genus reduction; <...>_{-1} = 0
              if (g >= 1) {
                TermKey nk = key;
                nk.symbols[a].genus = Genus::concrete(g - 1);
                nk.symbols[a].ins.push_back(Insertion{l - 1 - m, 0, InsIndex::basis(i)});
                nk.symbols[a].ins.push_back(Insertion{m, 0, InsIndex::basis(j)});
                out.add_term(std::move(nk), coeff * w * c);
              }
              // splitting over genus and over insertion distributions
              for (int gp = 0; gp <= g; ++gp) {
                size_t ways = size_t{1} << sym.ins.size();
                for (size_t mask = 0; mask < ways; ++mask) {
                  Symbol first{Genus::concrete(gp), {Insertion{l - 1 - m, 0, InsIndex::basis(i)}}};
                  Symbol second{Genus::concrete(g - gp), {Insertion{m, 0, InsIndex::basis(j)}}};
                  for (size_t pos = 0; pos < sym.ins.size(); ++pos)
                    (mask >> pos & 1 ? first : second).ins.push_back(sym.ins[pos]);
                  TermKey nk = key;
                  nk.symbols.erase(nk.symbols.begin() + static_cast<long>(a));
                  nk.symbols.push_back(std::move(first));
                  nk.symbols.push_back(std::move(second));
                  out.add_term(std::move(nk), coeff * w * c);
                }
              }
            }
        }
      }
    }
  }
  return out;
}

CorrelatorExpression expand_gluing(const CorrelatorExpression& e, int rank) {
  if (rank < 1) throw std::invalid_argument("expand_gluing: rank must be >= 1");
  CorrelatorExpression out;
  for (const auto& [key, coeff] : e.terms()) {
    std::map<int, int> uses;
    for (const auto& sym : key.symbols)
      for (const auto& ins : sym.ins)
        if (ins.idx.kind == InsIndex::Kind::Glue) ++uses[ins.idx.num];
    for (const auto& [label, n] : uses)
      if (n != 2)
        throw std::invalid_argument("expand_gluing: gluing label must occur exactly twice");
    if (uses.empty()) {
      out.add_term(key, coeff);
      continue;
    }
    std::vector<int> labels;
    for (const auto& [label, n] : uses) labels.push_back(label);
    std::vector<int> assign(labels.size(), 0);
    while (true) {
      std::map<int, int> mapping;
      for (size_t t = 0; t < labels.size(); ++t) mapping[labels[t]] = assign[t];
      TermKey nk = key;
      for (auto& sym : nk.symbols)
        for (auto& ins : sym.ins)
          if (ins.idx.kind == InsIndex::Kind::Glue) ins.idx = InsIndex::basis(mapping[ins.idx.num]);
      out.add_term(std::move(nk), coeff);
      size_t t = 0;
      while (t < assign.size() && ++assign[t] == rank) assign[t++] = 0;
      if (t == assign.size()) break;
    }
  }
  return out;
}

}  // namespace loopq::corr
