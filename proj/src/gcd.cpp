// Multivariate GCD over Z: content/monomial stripping, variable-support
// splitting, trial division, then a recursive subresultant PRS in the
// variable of least degree.

#include <algorithm>
#include <cstdint>
#include <random>

#include "cty/poly.hpp"

namespace cty {

namespace {

using Exp = Polynomial::Exp;

// Dense univariate polynomial with multivariate coefficients; c.back() != 0.
struct UPoly {
  std::vector<Polynomial> c;
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool zero() const { return c.empty(); }
  const Polynomial& lc() const { return c.back(); }
  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
};

Polynomial positive(Polynomial p) {
  if (!p.is_zero() && sgn(p.leading_coef()) < 0) return -p;
  return p;
}

UPoly to_u(const Polynomial& p, std::size_t v) {
  UPoly u;
  auto m = p.coefficients_in(v);
  if (m.empty()) return u;
  u.c.assign(m.rbegin()->first + 1, Polynomial(p.vars()));
  for (auto& [k, q] : m) u.c[k] = std::move(q);
  return u;
}

Polynomial from_u(const UPoly& u, std::size_t v, const VarSetPtr& vars) {
  Polynomial r(vars);
  std::vector<Exp> e(vars->size(), 0);
  for (std::size_t k = 0; k < u.c.size(); ++k) {
    if (u.c[k].is_zero()) continue;
    e[v] = static_cast<Exp>(k);
    r += u.c[k].mul_monomial(e);
  }
  return r;
}

Polynomial content_u(const UPoly& u) {
  std::vector<const Polynomial*> cs;
  for (const auto& c : u.c)
    if (!c.is_zero()) cs.push_back(&c);
  std::sort(cs.begin(), cs.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
  Polynomial g(u.c.front().vars());
  for (auto* c : cs) {
    g = gcd(g, *c);
    if (g.is_one()) break;
  }
  return g;
}

UPoly div_u(UPoly u, const Polynomial& s) {
  if (s.is_one()) return u;
  for (auto& c : u.c)
    if (!c.is_zero()) c = c.divide_exact(s);
  return u;
}

// lc(B)^(deg A - deg B + 1) * A mod B
UPoly prem(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  const int n = b.deg();
  int e = a.deg() - n + 1;
  const Polynomial& lb = b.lc();
  while (!r.zero() && r.deg() >= n) {
    Polynomial lr = r.lc();
    int s = r.deg() - n;
    for (auto& c : r.c)
      if (!c.is_zero()) c = c * lb;
    for (int k = 0; k <= n; ++k)
      if (!b.c[k].is_zero()) r.c[k + s] -= lr * b.c[k];
    r.trim();
    --e;
  }
  if (e > 0 && !r.zero()) {
    Polynomial f = lb.pow(static_cast<unsigned>(e));
    for (auto& c : r.c)
      if (!c.is_zero()) c = c * f;
  }
  return r;
}

UPoly subresultant(UPoly a, UPoly b, const VarSetPtr& vars) {
  if (a.deg() < b.deg()) std::swap(a, b);
  Polynomial g = Polynomial::constant(vars, 1), h = g;
  for (;;) {
    const int delta = a.deg() - b.deg();
    UPoly r = prem(a, b);
    if (r.zero()) break;
    if (r.deg() == 0) return UPoly{{Polynomial::constant(vars, 1)}};
    a = std::move(b);
    b = div_u(std::move(r), g * h.pow(static_cast<unsigned>(delta)));
    g = a.lc();
    if (delta == 1) h = g;
    else if (delta > 1) h = g.pow(static_cast<unsigned>(delta)).divide_exact(h.pow(static_cast<unsigned>(delta - 1)));
  }
  return div_u(std::move(b), content_u(b));
}

// gcd(b, content of a with respect to v), where b does not involve v.
Polynomial gcd_split(const Polynomial& b, const Polynomial& a, std::size_t v) {
  auto cs = a.coefficients_in(v);
  std::vector<const Polynomial*> order;
  for (auto& [k, c] : cs) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](auto* x, auto* y) { return x->size() < y->size(); });
  Polynomial g = b;
  for (auto* c : order) {
    g = gcd(g, *c);
    if (g.is_constant()) return Polynomial::constant(b.vars(), 1);
  }
  return positive(g);
}

// Certificate that gcd(a, b) = 1.  A common factor h involves some variable
// v of both supports, and lc_v(h) divides lc_v(a); so if specializing the
// other variables mod p keeps deg_v(a) and the univariate images are coprime,
// h cannot involve v.  A false result only means "unknown".
bool coprime_certificate(const Polynomial& a, const Polynomial& b, const std::vector<bool>& sa,
                         const std::vector<bool>& sb) {
  constexpr std::uint64_t P = 2147483647;  // 2^31 - 1
  auto mulm = [](std::uint64_t x, std::uint64_t y) { return x * y % P; };
  auto powm = [&](std::uint64_t x, unsigned e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, x = mulm(x, x))
      if (e & 1) r = mulm(r, x);
    return r;
  };
  auto inv = [&](std::uint64_t x) { return powm(x, static_cast<unsigned>(P - 2)); };
  std::mt19937_64 rng(0x5eed);
  const std::size_t nv = sa.size();
  std::vector<std::uint64_t> pt(nv);
  auto image = [&](const Polynomial& f, std::size_t v) {
    std::vector<std::uint64_t> u(f.degree(v) + 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Exp* e = f.exps(i);
      std::uint64_t c = mpz_fdiv_ui(f.coef(i).get_mpz_t(), P);
      for (std::size_t w = 0; w < nv && c; ++w)
        if (w != v && e[w]) c = mulm(c, powm(pt[w], e[w]));
      u[e[v]] = (u[e[v]] + c) % P;
    }
    return u;
  };
  auto trim = [](std::vector<std::uint64_t>& u) {
    while (!u.empty() && u.back() == 0) u.pop_back();
  };
  for (std::size_t v = 0; v < nv; ++v) {
    if (!sa[v] || !sb[v]) continue;
    for (auto& x : pt) x = rng() % (P - 1) + 1;
    auto ua = image(a, v), ub = image(b, v);
    if (ua.back() == 0) return false;
    trim(ub);
    // Euclid over F_p.
    while (!ub.empty()) {
      const std::uint64_t il = inv(ub.back());
      while (ua.size() >= ub.size()) {
        const std::uint64_t q = mulm(ua.back(), il);
        const std::size_t sh = ua.size() - ub.size();
        for (std::size_t k = 0; k < ub.size(); ++k) ua[sh + k] = (ua[sh + k] + P - mulm(q, ub[k])) % P;
        trim(ua);
        if (ua.empty()) break;
      }
      std::swap(ua, ub);
    }
    if (ua.size() != 1) return false;
  }
  return true;
}

// a, b nonzero, primitive over Z, without monomial factors.
Polynomial gcd_core(const Polynomial& a, const Polynomial& b) {
  const VarSetPtr& vars = a.vars();
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(vars, 1);
  if (a == b || a == -b) return positive(a);
  auto sa = a.support(), sb = b.support();
  for (std::size_t v = 0; v < sa.size(); ++v) {
    if (sa[v] && !sb[v]) return gcd_split(b, a, v);
    if (sb[v] && !sa[v]) return gcd_split(a, b, v);
  }
  if (b.size() <= a.size()) {
    if (a.divide(b)) return positive(b);
  } else if (b.divide(a)) {
    return positive(a);
  }
  if (coprime_certificate(a, b, sa, sb)) return Polynomial::constant(vars, 1);
  std::size_t best = sa.size();
  unsigned best_deg = ~0u;
  for (std::size_t v = 0; v < sa.size(); ++v) {
    if (!sa[v]) continue;
    unsigned d = std::max(a.degree(v), b.degree(v));
    if (d < best_deg) {
      best_deg = d;
      best = v;
    }
  }
  UPoly ua = to_u(a, best), ub = to_u(b, best);
  Polynomial ca = content_u(ua), cb = content_u(ub);
  Polynomial c = gcd(ca, cb);
  UPoly g = subresultant(div_u(std::move(ua), ca), div_u(std::move(ub), cb), vars);
  return positive(from_u(g, best, vars) * c);
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return positive(b);
  if (b.is_zero()) return positive(a);
  if (a.vars() != b.vars() && a.vars()->names() != b.vars()->names())
    throw Error(Errc::UniverseMismatch, "gcd over different variable sets");
  const VarSetPtr& vars = a.vars();
  mpz_class ca = a.content(), cb = b.content(), cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(vars, cg);
  auto ma = a.min_exponents(), mb = b.min_exponents();
  std::vector<Exp> mg(ma.size());
  for (std::size_t k = 0; k < ma.size(); ++k) mg[k] = std::min(ma[k], mb[k]);
  Polynomial pa = a.div_monomial_exact(ma).div_scalar_exact(ca);
  Polynomial pb = b.div_monomial_exact(mb).div_scalar_exact(cb);
  Polynomial core = gcd_core(pa, pb);
  return positive(core.mul_monomial(mg).scaled(cg));
}

}  // namespace cty
