#include "cty/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace cty {

using Exp = Polynomial::Exp;

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second)
      throw Error(Errc::InvalidParams, "duplicate variable name " + names_[i]);
  }
}

std::optional<std::size_t> VarSet::find(std::string_view n) const {
  auto it = index_.find(std::string(n));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarSetPtr make_vars(std::vector<std::string> names) {
  return std::make_shared<const VarSet>(std::move(names));
}

namespace {

int cmp_mono(const Exp* a, std::uint32_t ta, const Exp* b, std::uint32_t tb, std::size_t n) {
  if (ta != tb) return ta < tb ? -1 : 1;
  for (std::size_t k = 0; k < n; ++k)
    if (a[k] != b[k]) return a[k] < b[k] ? -1 : 1;
  return 0;
}

std::uint32_t total(const Exp* e, std::size_t n) {
  std::uint32_t s = 0;
  for (std::size_t k = 0; k < n; ++k) s += e[k];
  return s;
}

Exp checked_sum(std::uint32_t s) {
  if (s > 0xFFFFu) throw Error(Errc::InvalidParams, "exponent overflow");
  return static_cast<Exp>(s);
}

}  // namespace

Polynomial::Polynomial(VarSetPtr vars) : vars_(std::move(vars)), nv_(vars_ ? vars_->size() : 0) {}

Polynomial Polynomial::constant(VarSetPtr vars, const mpz_class& c) {
  Polynomial p(std::move(vars));
  if (c != 0) {
    std::vector<Exp> z(p.nv_, 0);
    p.push_term(z.data(), 0, c);
  }
  return p;
}

Polynomial Polynomial::variable(VarSetPtr vars, std::size_t i, unsigned power) {
  Polynomial p(std::move(vars));
  if (i >= p.nv_) throw Error(Errc::InvalidParams, "variable index out of range");
  std::vector<Exp> e(p.nv_, 0);
  e[i] = checked_sum(power);
  p.push_term(e.data(), power, 1);
  return p;
}

Polynomial Polynomial::variable(VarSetPtr vars, std::string_view name) {
  auto i = vars->find(name);
  if (!i) throw Error(Errc::UniverseMismatch, "unknown variable " + std::string(name));
  return variable(std::move(vars), *i);
}

void Polynomial::push_term(const Exp* e, std::uint32_t td, const mpz_class& c) {
  exps_.insert(exps_.end(), e, e + nv_);
  coefs_.push_back(c);
  tdeg_.push_back(td);
}

void Polynomial::check_same(const Polynomial& o) const {
  if (vars_ != o.vars_ && !(vars_ && o.vars_ && vars_->names() == o.vars_->names()))
    throw Error(Errc::UniverseMismatch, "polynomials over different variable sets");
}

Polynomial Polynomial::from_terms(VarSetPtr vars,
                                  std::vector<std::pair<std::vector<Exp>, mpz_class>> terms) {
  Polynomial p(std::move(vars));
  const std::size_t n = p.nv_;
  std::vector<std::uint32_t> td(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].first.size() != n) throw Error(Errc::InvalidParams, "exponent vector size");
    td[i] = total(terms[i].first.data(), n);
  }
  std::vector<std::size_t> ord(terms.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
    return cmp_mono(terms[a].first.data(), td[a], terms[b].first.data(), td[b], n) > 0;
  });
  for (std::size_t k = 0; k < ord.size();) {
    std::size_t i = ord[k];
    mpz_class c = terms[i].second;
    std::size_t k2 = k + 1;
    while (k2 < ord.size() &&
           cmp_mono(terms[ord[k2]].first.data(), td[ord[k2]], terms[i].first.data(), td[i], n) == 0)
      c += terms[ord[k2++]].second;
    if (c != 0) p.push_term(terms[i].first.data(), td[i], c);
    k = k2;
  }
  return p;
}

bool Polynomial::is_constant() const { return coefs_.empty() || (coefs_.size() == 1 && tdeg_[0] == 0); }

bool Polynomial::is_one() const { return coefs_.size() == 1 && tdeg_[0] == 0 && coefs_[0] == 1; }

bool Polynomial::nonnegative() const {
  return std::all_of(coefs_.begin(), coefs_.end(), [](const mpz_class& c) { return sgn(c) >= 0; });
}

unsigned Polynomial::degree(std::size_t var) const {
  unsigned d = 0;
  for (std::size_t i = 0; i < size(); ++i) d = std::max<unsigned>(d, exps(i)[var]);
  return d;
}

std::vector<Exp> Polynomial::min_exponents() const {
  std::vector<Exp> m(nv_, 0);
  if (is_zero()) return m;
  m.assign(exps(0), exps(0) + nv_);
  for (std::size_t i = 1; i < size(); ++i)
    for (std::size_t k = 0; k < nv_; ++k) m[k] = std::min(m[k], exps(i)[k]);
  return m;
}

std::vector<bool> Polynomial::support() const {
  std::vector<bool> s(nv_, false);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t k = 0; k < nv_; ++k)
      if (exps(i)[k]) s[k] = true;
  return s;
}

mpz_class Polynomial::content() const {
  mpz_class g = 0;
  for (const auto& c : coefs_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& c : r.coefs_) c = -c;
  return r;
}

Polynomial Polynomial::add_sub(const Polynomial& a, const Polynomial& b, bool sub) {
  a.check_same(b);
  Polynomial r(a.vars_ ? a.vars_ : b.vars_);
  std::size_t i = 0, j = 0;
  const std::size_t n = r.nv_;
  r.exps_.reserve((a.size() + b.size()) * n);
  r.coefs_.reserve(a.size() + b.size());
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size()) c = -1;
    else if (j == b.size()) c = 1;
    else c = cmp_mono(a.exps(i), a.tdeg_[i], b.exps(j), b.tdeg_[j], n);
    if (c > 0) {
      r.push_term(a.exps(i), a.tdeg_[i], a.coefs_[i]);
      ++i;
    } else if (c < 0) {
      r.push_term(b.exps(j), b.tdeg_[j], sub ? mpz_class(-b.coefs_[j]) : b.coefs_[j]);
      ++j;
    } else {
      mpz_class s = sub ? mpz_class(a.coefs_[i] - b.coefs_[j]) : mpz_class(a.coefs_[i] + b.coefs_[j]);
      if (s != 0) r.push_term(a.exps(i), a.tdeg_[i], s);
      ++i;
      ++j;
    }
  }
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  if (is_zero() && !vars_) return *this = o;
  return *this = add_sub(*this, o, false);
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  return *this = add_sub(*this, o, true);
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial Polynomial::mul_monomial(const std::vector<Exp>& e) const {
  Polynomial r = *this;
  std::uint32_t add = total(e.data(), nv_);
  for (std::size_t i = 0; i < size(); ++i) {
    Exp* p = r.exps_.data() + i * nv_;
    for (std::size_t k = 0; k < nv_; ++k) p[k] = checked_sum(std::uint32_t(p[k]) + e[k]);
    r.tdeg_[i] += add;
  }
  return r;
}

Polynomial Polynomial::div_monomial_exact(const std::vector<Exp>& e) const {
  Polynomial r = *this;
  std::uint32_t sub = total(e.data(), nv_);
  for (std::size_t i = 0; i < size(); ++i) {
    Exp* p = r.exps_.data() + i * nv_;
    for (std::size_t k = 0; k < nv_; ++k) {
      if (p[k] < e[k]) throw Error(Errc::InvalidParams, "inexact monomial division");
      p[k] = static_cast<Exp>(p[k] - e[k]);
    }
    r.tdeg_[i] -= sub;
  }
  return r;
}

Polynomial Polynomial::scaled(const mpz_class& c) const {
  if (c == 0) return Polynomial(vars_);
  Polynomial r = *this;
  for (auto& x : r.coefs_) x *= c;
  return r;
}

Polynomial Polynomial::div_scalar_exact(const mpz_class& c) const {
  if (c == 0) throw Error(Errc::DivisionByZero, "scalar division by zero");
  Polynomial r = *this;
  for (auto& x : r.coefs_) {
    if (!mpz_divisible_p(x.get_mpz_t(), c.get_mpz_t()))
      throw Error(Errc::InvalidParams, "inexact scalar division");
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  }
  return r;
}

namespace {

// Heap entry for a product term s[i] * l[j], ordered by its monomial.
struct PairKey {
  std::uint32_t i, j, td;
};

}  // namespace

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  Polynomial r(a.vars_ ? a.vars_ : b.vars_);
  if (a.is_zero() || b.is_zero()) return r;
  const Polynomial& s = a.size() <= b.size() ? a : b;
  const Polynomial& l = a.size() <= b.size() ? b : a;
  const std::size_t n = r.nv_;
  if (s.size() == 1) {
    std::vector<Exp> e(s.exps(0), s.exps(0) + n);
    return l.mul_monomial(e).scaled(s.coefs_[0]);
  }
  auto less = [&](const PairKey& x, const PairKey& y) {
    if (x.td != y.td) return x.td < y.td;
    const Exp* xs = s.exps(x.i);
    const Exp* xl = l.exps(x.j);
    const Exp* ys = s.exps(y.i);
    const Exp* yl = l.exps(y.j);
    for (std::size_t k = 0; k < n; ++k) {
      std::uint32_t u = std::uint32_t(xs[k]) + xl[k], v = std::uint32_t(ys[k]) + yl[k];
      if (u != v) return u < v;
    }
    return false;
  };
  auto same = [&](const PairKey& x, const PairKey& y) { return !less(x, y) && !less(y, x); };
  std::vector<PairKey> heap;
  heap.reserve(s.size());
  for (std::uint32_t i = 0; i < s.size(); ++i) heap.push_back({i, 0, s.tdeg_[i] + l.tdeg_[0]});
  std::make_heap(heap.begin(), heap.end(), less);
  std::vector<Exp> mono(n);
  mpz_class acc;
  auto advance = [&](PairKey k) {
    if (k.j + 1 < l.size()) {
      heap.push_back({k.i, k.j + 1, s.tdeg_[k.i] + l.tdeg_[k.j + 1]});
      std::push_heap(heap.begin(), heap.end(), less);
    }
  };
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), less);
    PairKey top = heap.back();
    heap.pop_back();
    acc = s.coefs_[top.i] * l.coefs_[top.j];
    advance(top);
    while (!heap.empty() && same(heap.front(), top)) {
      std::pop_heap(heap.begin(), heap.end(), less);
      PairKey k = heap.back();
      heap.pop_back();
      acc += s.coefs_[k.i] * l.coefs_[k.j];
      advance(k);
    }
    if (acc != 0) {
      const Exp* xs = s.exps(top.i);
      const Exp* xl = l.exps(top.j);
      for (std::size_t k = 0; k < n; ++k) mono[k] = checked_sum(std::uint32_t(xs[k]) + xl[k]);
      r.push_term(mono.data(), top.td, acc);
    }
  }
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.coefs_.size() != b.coefs_.size()) return false;
  if (a.is_zero()) return true;
  a.check_same(b);
  return a.coefs_ == b.coefs_ && a.exps_ == b.exps_;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(vars_, 1);
  Polynomial base = *this;
  while (k) {
    if (k & 1u) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

namespace {

struct QKey {
  std::uint32_t j, i, td;
};

}  // namespace

std::optional<Polynomial> Polynomial::divide(const Polynomial& d) const {
  check_same(d);
  if (d.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  Polynomial q(vars_ ? vars_ : d.vars_);
  if (is_zero()) return q;
  const std::size_t n = nv_;
  const Exp* dl = d.exps(0);
  const Exp* dt = d.exps(d.size() - 1);
  const Exp* al = exps(0);
  const Exp* at = exps(size() - 1);
  for (std::size_t k = 0; k < n; ++k)
    if (al[k] < dl[k] || at[k] < dt[k]) return std::nullopt;
  if (!mpz_divisible_p(coefs_.front().get_mpz_t(), d.coefs_.front().get_mpz_t()) ||
      !mpz_divisible_p(coefs_.back().get_mpz_t(), d.coefs_.back().get_mpz_t()))
    return std::nullopt;
  std::vector<unsigned> bound(n), dmin(n);
  {
    auto md = d.min_exponents();
    auto ma = min_exponents();
    for (std::size_t k = 0; k < n; ++k) {
      unsigned da = degree(k), dd = d.degree(k);
      if (da < dd || ma[k] < md[k]) return std::nullopt;
      bound[k] = da - dd;
      dmin[k] = ma[k] - md[k];
    }
  }
  if (d.size() == 1) {
    std::vector<Exp> e(dl, dl + n);
    for (std::size_t i = 0; i < size(); ++i)
      if (!mpz_divisible_p(coefs_[i].get_mpz_t(), d.coefs_[0].get_mpz_t())) return std::nullopt;
    Polynomial r = div_monomial_exact(e);
    for (auto& c : r.coefs_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.coefs_[0].get_mpz_t());
    return r;
  }
  auto less = [&](const QKey& x, const QKey& y) {
    if (x.td != y.td) return x.td < y.td;
    const Exp* xq = q.exps(x.j);
    const Exp* xd = d.exps(x.i);
    const Exp* yq = q.exps(y.j);
    const Exp* yd = d.exps(y.i);
    for (std::size_t k = 0; k < n; ++k) {
      std::uint32_t u = std::uint32_t(xq[k]) + xd[k], v = std::uint32_t(yq[k]) + yd[k];
      if (u != v) return u < v;
    }
    return false;
  };
  std::vector<QKey> heap;
  std::vector<Exp> mono(n), qm(n);
  std::size_t ai = 0;
  mpz_class c, t;
  const std::uint32_t dtd = d.tdeg_[0];
  while (ai < size() || !heap.empty()) {
    // Current largest monomial: from the dividend or the heap top.
    int which;  // 1 dividend, -1 heap, 0 both
    if (ai == size()) which = -1;
    else if (heap.empty()) which = 1;
    else {
      const QKey& h = heap.front();
      if (tdeg_[ai] != h.td) which = tdeg_[ai] > h.td ? 1 : -1;
      else {
        which = 0;
        const Exp* xa = exps(ai);
        const Exp* xq = q.exps(h.j);
        const Exp* xd = d.exps(h.i);
        for (std::size_t k = 0; k < n; ++k) {
          std::uint32_t u = xa[k], v = std::uint32_t(xq[k]) + xd[k];
          if (u != v) {
            which = u > v ? 1 : -1;
            break;
          }
        }
      }
    }
    std::uint32_t td;
    c = 0;
    if (which >= 0) {
      std::copy(exps(ai), exps(ai) + n, mono.begin());
      td = tdeg_[ai];
      c = coefs_[ai];
      ++ai;
    } else {
      const QKey& h = heap.front();
      for (std::size_t k = 0; k < n; ++k) mono[k] = Exp(q.exps(h.j)[k] + d.exps(h.i)[k]);
      td = h.td;
    }
    if (which <= 0) {
      while (!heap.empty()) {
        const QKey& h = heap.front();
        if (h.td != td) break;
        bool eq = true;
        for (std::size_t k = 0; k < n; ++k)
          if (std::uint32_t(q.exps(h.j)[k]) + d.exps(h.i)[k] != mono[k]) {
            eq = false;
            break;
          }
        if (!eq) break;
        std::pop_heap(heap.begin(), heap.end(), less);
        QKey k = heap.back();
        heap.pop_back();
        t = q.coefs_[k.j] * d.coefs_[k.i];
        c -= t;
        if (k.i + 1 < d.size()) {
          heap.push_back({k.j, k.i + 1, q.tdeg_[k.j] + d.tdeg_[k.i + 1]});
          std::push_heap(heap.begin(), heap.end(), less);
        }
      }
    }
    if (c == 0) continue;
    if (td < dtd) return std::nullopt;
    for (std::size_t k = 0; k < n; ++k) {
      if (mono[k] < dl[k]) return std::nullopt;
      qm[k] = Exp(mono[k] - dl[k]);
      if (qm[k] > bound[k] || qm[k] < dmin[k]) return std::nullopt;
    }
    if (!mpz_divisible_p(c.get_mpz_t(), d.coefs_[0].get_mpz_t())) return std::nullopt;
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.coefs_[0].get_mpz_t());
    q.push_term(qm.data(), td - dtd, c);
    heap.push_back({std::uint32_t(q.size() - 1), 1, (td - dtd) + d.tdeg_[1]});
    std::push_heap(heap.begin(), heap.end(), less);
  }
  return q;
}

Polynomial Polynomial::divide_exact(const Polynomial& d) const {
  auto q = divide(d);
  if (!q) throw Error(Errc::InvalidParams, "inexact polynomial division");
  return *q;
}

std::map<unsigned, Polynomial> Polynomial::coefficients_in(std::size_t var) const {
  std::map<unsigned, Polynomial> out;
  for (std::size_t i = 0; i < size(); ++i) {
    unsigned e = exps(i)[var];
    auto it = out.find(e);
    if (it == out.end()) it = out.emplace(e, Polynomial(vars_)).first;
    Polynomial& p = it->second;
    p.exps_.insert(p.exps_.end(), exps(i), exps(i) + nv_);
    p.exps_[p.exps_.size() - nv_ + var] = 0;
    p.coefs_.push_back(coefs_[i]);
    p.tdeg_.push_back(tdeg_[i] - e);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < size(); ++i) {
    mpz_class c = coefs_[i];
    if (i == 0) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    c = abs(c);
    const Exp* e = exps(i);
    bool first = true;
    if (tdeg_[i] == 0 || c != 1) {
      os << c.get_str();
      first = false;
    }
    for (std::size_t k = 0; k < nv_; ++k) {
      if (!e[k]) continue;
      if (!first) os << "*";
      os << vars_->name(k);
      if (e[k] > 1) os << "^" << e[k];
      first = false;
    }
  }
  return os.str();
}

namespace {

class PolyParser {
 public:
  PolyParser(const VarSetPtr& vars, std::string_view s) : vars_(vars), s_(s) {}

  Polynomial parse_all() {
    Polynomial p = parse_sum();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  const VarSetPtr& vars_;
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(Errc::Parse, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  Polynomial parse_sum() {
    std::vector<std::pair<std::vector<Exp>, mpz_class>> terms;
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    for (;;) {
      auto t = parse_term();
      if (neg) t.second = -t.second;
      terms.push_back(std::move(t));
      if (eat('+')) neg = false;
      else if (eat('-')) neg = true;
      else break;
    }
    return Polynomial::from_terms(vars_, std::move(terms));
  }

  std::pair<std::vector<Exp>, mpz_class> parse_term() {
    std::vector<Exp> e(vars_->size(), 0);
    mpz_class c = 1;
    bool any = false;
    do {
      skip();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        c *= mpz_class(digits());
      } else {
        std::size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
          ++pos_;
        if (b == pos_) fail("expected factor");
        auto name = s_.substr(b, pos_ - b);
        auto i = vars_->find(name);
        if (!i) fail("unknown variable '" + std::string(name) + "'");
        unsigned k = 1;
        if (eat('^')) {
          skip();
          std::string d = digits();
          if (d.empty()) fail("expected exponent");
          k = static_cast<unsigned>(std::stoul(d));
        }
        e[*i] = checked_sum(std::uint32_t(e[*i]) + k);
      }
      any = true;
    } while (eat('*'));
    if (!any) fail("empty term");
    return {std::move(e), c};
  }
};

}  // namespace

Polynomial Polynomial::parse(VarSetPtr vars, std::string_view text) {
  PolyParser p(vars, text);
  return p.parse_all();
}

// ---------------------------------------------------------------- rational

RationalFunction::RationalFunction(VarSetPtr vars)
    : num_(vars), den_(Polynomial::constant(vars, 1)) {}

RationalFunction::RationalFunction(const Polynomial& num)
    : num_(num), den_(Polynomial::constant(num.vars(), 1)) {}

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw Error(Errc::DivisionByZero, "zero denominator");
  reduce();
}

RationalFunction RationalFunction::constant(VarSetPtr vars, const mpz_class& c) {
  return RationalFunction(Polynomial::constant(std::move(vars), c));
}

RationalFunction RationalFunction::variable(VarSetPtr vars, std::string_view name) {
  return RationalFunction(Polynomial::variable(std::move(vars), name));
}

void RationalFunction::normalize_sign() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(num_.vars() ? num_.vars() : den_.vars(), 1);
    return;
  }
  if (sgn(den_.leading_coef()) < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

void RationalFunction::reduce() {
  if (num_.is_zero()) {
    normalize_sign();
    return;
  }
  Polynomial g = gcd(num_, den_);
  if (!g.is_one()) {
    num_ = num_.divide_exact(g);
    den_ = den_.divide_exact(g);
  }
  normalize_sign();
}

RationalFunction RationalFunction::inverse() const {
  if (num_.is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
  RationalFunction r;
  r.num_ = den_;
  r.den_ = num_;
  r.normalize_sign();
  return r;
}

RationalFunction RationalFunction::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  RationalFunction r;
  r.num_ = num_.pow(static_cast<unsigned>(k));
  r.den_ = den_.pow(static_cast<unsigned>(k));
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    reduce();
    return *this;
  }
  Polynomial g = gcd(den_, o.den_);
  Polynomial ad = den_.divide_exact(g), bd = o.den_.divide_exact(g);
  Polynomial n = num_ * bd + o.num_ * ad;
  Polynomial d = den_ * bd;
  if (!n.is_zero() && !g.is_one()) {
    Polynomial h = gcd(n, g);
    if (!h.is_one()) {
      n = n.divide_exact(h);
      d = d.divide_exact(h);
    }
  }
  num_ = std::move(n);
  den_ = std::move(d);
  normalize_sign();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  RationalFunction neg = o;
  neg.num_ = -neg.num_;
  return *this += neg;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = o;
  // Laurent-type cancellations are usually exact: try plain division first.
  if (o.den_.size() > 1 && o.den_.size() <= num_.size()) {
    if (auto q = num_.divide(o.den_)) {
      Polynomial g2 = gcd(o.num_, den_);
      Polynomial c = g2.is_one() ? o.num_ : o.num_.divide_exact(g2);
      Polynomial b = g2.is_one() ? den_ : den_.divide_exact(g2);
      num_ = *q * c;
      den_ = std::move(b);
      normalize_sign();
      return *this;
    }
  }
  Polynomial g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
  Polynomial a = g1.is_one() ? num_ : num_.divide_exact(g1);
  Polynomial d2 = g1.is_one() ? o.den_ : o.den_.divide_exact(g1);
  Polynomial c = g2.is_one() ? o.num_ : o.num_.divide_exact(g2);
  Polynomial b = g2.is_one() ? den_ : den_.divide_exact(g2);
  num_ = a * c;
  den_ = b * d2;
  normalize_sign();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) { return *this *= o.inverse(); }

std::string RationalFunction::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalFunction RationalFunction::parse(VarSetPtr vars, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  if (s.empty()) throw Error(Errc::Parse, "empty rational function");
  if (s.front() != '(') return RationalFunction(Polynomial::parse(vars, s));
  int depth = 0;
  std::size_t close = std::string_view::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string_view::npos) throw Error(Errc::Parse, "unbalanced parentheses");
  Polynomial n = Polynomial::parse(vars, s.substr(1, close - 1));
  std::string_view rest = trim(s.substr(close + 1));
  if (rest.empty()) return RationalFunction(n);
  if (rest.front() != '/') throw Error(Errc::Parse, "expected '/'");
  rest = trim(rest.substr(1));
  if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
  Polynomial d = Polynomial::parse(vars, rest);
  return RationalFunction(n, d);
}

RationalFunction arith(ArithOp op, const RationalFunction& f, const RationalFunction& g) {
  switch (op) {
    case ArithOp::Add: return f + g;
    case ArithOp::Mul: return f * g;
    case ArithOp::Div:
      if (g.is_zero()) throw Error(Errc::DivisionByZero, "arith div by zero");
      return f / g;
  }
  return f;
}

RationalFunction substitute(const RationalFunction& f,
                            const std::map<std::string, RationalFunction>& bindings) {
  const VarSetPtr& vars = f.vars();
  std::vector<const RationalFunction*> bound(vars->size(), nullptr);
  for (const auto& [name, val] : bindings) {
    auto i = vars->find(name);
    if (!i) continue;
    if (val.vars() && val.vars()->names() != vars->names())
      throw Error(Errc::UniverseMismatch, "binding over a different variable set");
    bound[*i] = &val;
  }
  auto eval = [&](const Polynomial& p) {
    RationalFunction acc(vars);
    std::vector<Exp> free(vars->size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      RationalFunction term = RationalFunction::constant(vars, p.coef(i));
      for (std::size_t k = 0; k < vars->size(); ++k) {
        Exp e = p.exps(i)[k];
        free[k] = bound[k] ? 0 : e;
        if (bound[k] && e) term *= bound[k]->pow(e);
      }
      term *= RationalFunction(Polynomial::constant(vars, 1).mul_monomial(free));
      acc += term;
    }
    return acc;
  };
  RationalFunction d = eval(f.den());
  if (d.is_zero()) throw Error(Errc::DivisionByZero, "denominator vanishes under substitution");
  return eval(f.num()) / d;
}

bool is_laurent(const RationalFunction& f, const std::vector<std::string>& vars) {
  const auto& vs = f.vars();
  std::vector<bool> sel(vs->size(), false);
  for (const auto& v : vars)
    if (auto i = vs->find(v)) sel[*i] = true;
  const Polynomial& d = f.den();
  for (std::size_t i = 1; i < d.size(); ++i)
    for (std::size_t k = 0; k < vs->size(); ++k)
      if (sel[k] && d.exps(i)[k] != d.exps(0)[k]) return false;
  return true;
}

// ---------------------------------------------------------------- semifield

SemifieldElement SemifieldElement::from_raw(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw Error(Errc::DivisionByZero, "semifield zero denominator");
  if (num.is_zero()) throw Error(Errc::InvalidParams, "zero is not a semifield element");
  SemifieldElement s;
  Polynomial g = gcd(num, den);
  if (!g.is_one()) {
    Polynomial n2 = num.divide_exact(g), d2 = den.divide_exact(g);
    if (sgn(d2.leading_coef()) < 0) {
      n2 = -n2;
      d2 = -d2;
    }
    if (n2.nonnegative() && d2.nonnegative()) {
      num = std::move(n2);
      den = std::move(d2);
    }
  }
  if (!num.nonnegative() || !den.nonnegative())
    throw Error(Errc::InvalidParams, "semifield witness lost nonnegativity");
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  return s;
}

SemifieldElement SemifieldElement::one(VarSetPtr vars) {
  SemifieldElement s;
  s.num_ = Polynomial::constant(vars, 1);
  s.den_ = s.num_;
  return s;
}

SemifieldElement SemifieldElement::generator(VarSetPtr vars, std::string_view name) {
  SemifieldElement s;
  s.num_ = Polynomial::variable(vars, name);
  s.den_ = Polynomial::constant(vars, 1);
  return s;
}

SemifieldElement SemifieldElement::from_witness(const Polynomial& num, const Polynomial& den) {
  if (!num.nonnegative() || !den.nonnegative())
    throw Error(Errc::InvalidParams, "witness must have nonnegative coefficients");
  return from_raw(num, den);
}

SemifieldElement SemifieldElement::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  SemifieldElement s;
  s.num_ = num_.pow(static_cast<unsigned>(k));
  s.den_ = den_.pow(static_cast<unsigned>(k));
  return s;
}

namespace {

// Divides out g when both quotients stay nonnegative.
bool try_cancel(Polynomial& a, Polynomial& b, const Polynomial& g) {
  if (g.is_one()) return false;
  Polynomial a2 = a.divide_exact(g), b2 = b.divide_exact(g);
  if (!a2.nonnegative() || !b2.nonnegative()) return false;
  a = std::move(a2);
  b = std::move(b2);
  return true;
}

}  // namespace

SemifieldElement operator*(const SemifieldElement& a, const SemifieldElement& b) {
  Polynomial an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
  try_cancel(an, bd, gcd(an, bd));
  try_cancel(bn, ad, gcd(bn, ad));
  SemifieldElement s;
  s.num_ = an * bn;
  s.den_ = ad * bd;
  return s;
}

SemifieldElement operator/(const SemifieldElement& a, const SemifieldElement& b) { return a * b.inverse(); }

SemifieldElement operator+(const SemifieldElement& a, const SemifieldElement& b) {
  if (a.den_ == b.den_) return SemifieldElement::from_raw(a.num_ + b.num_, a.den_);
  Polynomial ad = a.den_, bd = b.den_;
  Polynomial g = gcd(ad, bd);
  Polynomial den;
  if (try_cancel(ad, bd, g)) {
    // ad, bd now hold the cofactors a.den/g and b.den/g.
    den = a.den_ * bd;
  } else {
    den = a.den_ * b.den_;
  }
  Polynomial num = a.num_ * bd + b.num_ * ad;
  // With reduced summands any common factor of num and den divides g.
  if (g.is_one()) {
    SemifieldElement s;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    return s;
  }
  Polynomial h = gcd(num, g);
  if (!h.is_one()) try_cancel(num, den, h);
  SemifieldElement s;
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  return s;
}

bool operator==(const SemifieldElement& a, const SemifieldElement& b) {
  if (a.num_ == b.num_ && a.den_ == b.den_) return true;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

}  // namespace cty
