#include "cty/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace cty {

namespace {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  unsigned w = std::min<unsigned>(worker_threads(), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (unsigned k = 0; k < w; ++k)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::string str(const TYIndex& i) { return to_string(i); }

// Multiplicative bookkeeping for Y-relations: every polynomial is split by
// trial division into a rational constant, a Laurent monomial and powers of
// pool entries.  Equal factorizations prove equality; unequal ones prove
// nothing, since the pool is not guaranteed to be coprime.
struct Factored {
  mpq_class c = 1;
  std::vector<int> mono;
  std::map<int, int> f;

  void add(const Factored& o, int k) {
    if (mono.empty()) mono.assign(o.mono.size(), 0);
    for (std::size_t i = 0; i < o.mono.size(); ++i) mono[i] += k * o.mono[i];
    for (const auto& [j, e] : o.f)
      if ((f[j] += k * e) == 0) f.erase(j);
    mpq_class m = 1;
    for (int i = 0; i < std::abs(k); ++i) m *= o.c;
    if (k > 0) c *= m;
    else if (k < 0) c /= m;
  }
  bool same(const Factored& o) const {
    if (c != o.c || f != o.f) return false;
    for (std::size_t i = 0; i < std::max(mono.size(), o.mono.size()); ++i)
      if ((i < mono.size() ? mono[i] : 0) != (i < o.mono.size() ? o.mono[i] : 0)) return false;
    return true;
  }
};

class FactorPool {
 public:
  Factored factor(const Polynomial& p) {
    Factored r;
    mpz_class ct = p.content();
    if (sgn(p.leading_coef()) < 0) ct = -ct;
    r.c = ct;
    Polynomial q = p.div_scalar_exact(ct);
    auto me = q.min_exponents();
    q = q.div_monomial_exact(me);
    r.mono.assign(me.begin(), me.end());
    for (int j : order_) {
      if (q.is_one()) break;
      const Polynomial& d = pool_[j];
      while (q.size() >= d.size()) {
        auto z = q.divide(d);
        if (!z) break;
        q = std::move(*z);
        ++r.f[j];
      }
    }
    if (!q.is_one()) {
      const int j = static_cast<int>(pool_.size());
      pool_.push_back(std::move(q));
      auto at = std::upper_bound(order_.begin(), order_.end(), j,
                                 [&](int a, int b) { return pool_[a].size() < pool_[b].size(); });
      order_.insert(at, j);
      ++r.f[j];
    }
    return r;
  }
  const Polynomial& at(int j) const { return pool_[j]; }

 private:
  std::vector<Polynomial> pool_;
  std::vector<int> order_;  // by term count, so composites split into known pieces
};



// Seed dynamics for run().  x evolves as in mutate_seed_in_place.  y is kept
// factored over a pool: vertices waiting for their next mutation accumulate
// (1 + y_k) factors that would be expensive to expand, while the y being
// mutated is always small enough to expand.
class Evolver {
 public:
  explicit Evolver(const Seed& s0) : Q(s0.Q), x(s0.x), mode_(s0.mode), vars_(s0.vars) {
    if (mode_ == SeedMode::Trivial) return;
    const std::size_t nv = vars_->size();
    for (int i = 1; i <= Q.size(); ++i) {
      Factored f;
      f.mono.assign(nv, 0);
      f.mono[*vars_->find("y" + std::to_string(i))] = 1;
      y_.push_back(std::move(f));
    }
  }

  SemifieldElement y(int v) const {
    auto [n, d] = expand(y_[v]);
    return SemifieldElement::from_witness(n, d);
  }

  void step(const std::vector<int>& S) {
    check_commuting(Q, S);
    std::vector<int> v = S;
    std::sort(v.begin(), v.end());
    for (int k : v) mutate(k);
  }

  AnnotatedQuiver Q;
  std::vector<RationalFunction> x;

 private:
  SeedMode mode_;
  VarSetPtr vars_;
  FactorPool pool_;
  std::vector<Factored> y_;

  std::pair<Polynomial, Polynomial> expand(const Factored& f) const {
    Polynomial n = Polynomial::constant(vars_, f.c.get_num()), d = Polynomial::constant(vars_, f.c.get_den());
    std::vector<Polynomial::Exp> mp(f.mono.size(), 0), mn(f.mono.size(), 0);
    for (std::size_t i = 0; i < f.mono.size(); ++i)
      (f.mono[i] > 0 ? mp : mn)[i] = static_cast<Polynomial::Exp>(std::abs(f.mono[i]));
    n = n.mul_monomial(mp);
    d = d.mul_monomial(mn);
    for (const auto& [j, e] : f.f) (e > 0 ? n : d) *= pool_.at(j).pow(static_cast<unsigned>(std::abs(e)));
    return {std::move(n), std::move(d)};
  }

  void mutate(int k) {
    const int n = Q.size();
    Polynomial yn, yd;
    if (mode_ != SeedMode::Trivial) std::tie(yn, yd) = expand(y_[k]);
    if (mode_ != SeedMode::CoefficientsOnly) {
      RationalFunction plus = RationalFunction::constant(vars_, 1), minus = plus;
      for (int j = 0; j < n; ++j) {
        int e = Q.b(j, k);
        if (e > 0) plus *= x[j].pow(e);
        else if (e < 0) minus *= x[j].pow(-e);
      }
      if (mode_ == SeedMode::Trivial) {
        x[k] = (plus + minus) / x[k];
      } else {
        RationalFunction p(yn), q(yd);
        x[k] = (p * plus + q * minus) / (RationalFunction(yn + yd) * x[k]);
      }
    }
    if (mode_ != SeedMode::Trivial) {
      // 1 + y_k = (yn + yd) / yd, and yd is the negative part of y_k.
      Factored onep = pool_.factor(yn + yd), neg;
      neg.c = 1 / mpq_class(y_[k].c.get_den());
      neg.mono.assign(y_[k].mono.size(), 0);
      for (std::size_t i = 0; i < neg.mono.size(); ++i) neg.mono[i] = std::min(0, y_[k].mono[i]);
      for (const auto& [j, e] : y_[k].f)
        if (e < 0) neg.f[j] = e;
      onep.add(neg, 1);
      Factored frac = y_[k];
      frac.add(onep, -1);
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        int e = Q.b(k, i);
        if (e > 0) y_[i].add(frac, e);
        else if (e < 0) y_[i].add(onep, -e);
      }
      Factored inv;
      inv.add(y_[k], -1);
      y_[k] = std::move(inv);
    }
    Q.mutate_in_place(k);
  }
};

}  // namespace

unsigned worker_threads() {
  if (const char* e = std::getenv("CLUSTER_TY_THREADS")) {
    int v = std::atoi(e);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunTrace run(const Construction& c, int level, const RunOptions& opt) {
  if (opt.nmin > 0 || opt.nmax < 0) throw Error(Errc::InvalidParams, "window must contain n = 0");
  RunTrace tr;
  tr.cd = c.ext.cd;
  tr.level = level;
  tr.opt = opt;
  const auto& d = tr.cd.d;
  Embedding g(tr.cd, c.q0, c.schedule, EmbedKind::G), gp(tr.cd, c.q0, c.schedule, EmbedKind::GPrime);
  const Seed s0 = initial_seed(c.q0, opt.mode);
  tr.vars = s0.vars;
  for (int i = 1; i <= c.q0.size(); ++i) tr.xvars.push_back("x" + std::to_string(i));
  const bool want_x = opt.mode != SeedMode::CoefficientsOnly, want_y = opt.mode != SeedMode::Trivial;

  auto inside = [&](const TYIndex& i) { return i.n >= opt.nmin && i.n <= opt.nmax; };
  auto put_x = [&](const TYIndex& i, const RationalFunction& v) {
    if (!want_x || !inside(i)) return;
    auto [it, fresh] = tr.x.emplace(i, v);
    if (!fresh && it->second != v) tr.conflicts.push_back("x" + str(i));
  };
  auto put_y = [&](const TYIndex& i, const SemifieldElement& v) {
    if (!want_y || !inside(i)) return;
    auto [it, fresh] = tr.y.emplace(i, v);
    if (!fresh && !(it->second == v)) tr.conflicts.push_back("y" + str(i));
  };
  auto over = [&](const Evolver& s, const std::vector<int>& S) {
    if (opt.budget == 0) return false;
    for (int v : S)
      if ((want_x && s.x[v].size() > opt.budget) || (want_y && s.y(v).size() > opt.budget)) return true;
    return false;
  };
  auto label = [&](const Embedding& e, int v, int n) -> std::optional<TYIndex> {
    try {
      return e.inverse(v, n);
    } catch (const Error&) {
      ++tr.unlabeled;
      return std::nullopt;
    }
  };

  // Label (a,m,n) of x is produced by the mutation at step n - d_a, and the
  // y label (a,m,n) sits on the seed at step n.  Initial x's get their labels
  // from the first step that mutates them, read off the schedule.
  for (int v = 0; v < c.q0.size(); ++v) {
    auto has = [&](int n) {
      const auto& S = c.schedule.at(n);
      return std::binary_search(S.begin(), S.end(), v);
    };
    const auto& l = c.q0.label(v);
    for (int n = 0; n < 2 * tr.cd.t; ++n)
      if (has(n)) {
        if (auto i = label(g, v, n)) put_x(*i, s0.x[v]);
        break;
      }
    for (int n = -1; n >= -2 * tr.cd.t; --n)
      if (has(n)) {
        put_x({l.a, l.m, n + d[l.a]}, s0.x[v]);
        break;
      }
  }

  Evolver s(s0);
  if (opt.keep_quivers) tr.quivers[0] = s.Q;
  for (int n = 0;; ++n) {
    const auto& S = c.schedule.at(n);
    for (int v : S) {
      if (auto i = label(g, v, n)) put_x(*i, s.x[v]);
      if (auto i = label(gp, v, n); i && want_y && inside(*i)) put_y(*i, s.y(v));
    }
    if (n >= opt.nmax) break;
    s.step(S);
    for (int v : S) {
      const auto& l = c.q0.label(v);
      put_x({l.a, l.m, n + d[l.a]}, s.x[v]);
    }
    tr.reached_max = n + 1;
    if (opt.keep_quivers) tr.quivers[n + 1] = s.Q;
    if (over(s, S)) {
      tr.budget_hit = true;
      break;
    }
  }
  s = Evolver(s0);
  for (int n = -1; n >= opt.nmin; --n) {
    const auto& S = c.schedule.at(n);
    for (int v : S) {
      const auto& l = c.q0.label(v);
      put_x({l.a, l.m, n + d[l.a]}, s.x[v]);
    }
    if (n == opt.nmin && !want_y) break;
    s.step(S);
    for (int v : S) {
      if (auto i = label(g, v, n)) put_x(*i, s.x[v]);
      if (auto i = label(gp, v, n); i && want_y && inside(*i)) put_y(*i, s.y(v));
    }
    tr.reached_min = n;
    if (opt.keep_quivers) tr.quivers[n] = s.Q;
    if (over(s, S)) {
      tr.budget_hit = true;
      break;
    }
  }
  return tr;
}

int Report::count(const std::string& status) const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [&](const CheckEntry& e) { return e.status == status; }));
}

bool Report::ok() const { return count("fail") == 0 && count("missing") == 0; }

std::string Report::summary() const {
  std::string s = name + ": " + std::to_string(count("pass")) + " pass, " + std::to_string(count("fail")) + " fail";
  if (int m = count("missing")) s += ", " + std::to_string(m) + " missing";
  if (int b = count("budget_exceeded")) s += ", " + std::to_string(b) + " budget exceeded";
  return s;
}

std::string Report::to_json(bool full) const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["ok"] = ok();
  j["summary"] = {{"pass", count("pass")},
                  {"fail", count("fail")},
                  {"missing", count("missing")},
                  {"budget_exceeded", count("budget_exceeded")}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json x{{"relation", e.relation}, {"status", e.status}};
    if (full || e.status == "fail") {
      x["lhs"] = e.lhs;
      x["rhs"] = e.rhs;
    }
    arr.push_back(std::move(x));
  }
  j["entries"] = std::move(arr);
  return j.dump();
}

// Relations reaching outside the label window are out of scope, not missing.
static bool in_window(const RunTrace& tr, const TYIndex& i) { return i.n >= tr.opt.nmin && i.n <= tr.opt.nmax; }

Report verify_t(const RunTrace& tr, bool full) {
  Report rep;
  rep.name = "T-system";
  const bool coeff = tr.opt.mode == SeedMode::WithCoefficients;
  if (tr.opt.mode == SeedMode::CoefficientsOnly) return rep;
  std::vector<TYIndex> centers;
  for (const auto& [k, v] : tr.x) {
    const int da = tr.cd.d[k.a];
    if (!tr.x.count({k.a, k.m, k.n + 2 * da})) continue;
    TYIndex c{k.a, k.m, k.n + da};
    Relation rel = t_relation(c, tr.cd, tr.level);
    bool ok = std::all_of(rel.unit_term.begin(), rel.unit_term.end(), [&](auto& u) { return in_window(tr, u); });
    for (const auto& [u, m] : rel.product_term) ok = ok && in_window(tr, u);
    if (ok) centers.push_back(c);
  }
  rep.entries.resize(centers.size());
  const auto one = RationalFunction::constant(tr.vars, 1);
  parallel_for(centers.size(), [&](std::size_t i) {
    const TYIndex& c = centers[i];
    CheckEntry& e = rep.entries[i];
    Relation rel = t_relation(c, tr.cd, tr.level);
    e.relation = "T" + str(rel.lhs_minus) + "*T" + str(rel.lhs_plus);
    auto get = [&](const TYIndex& x) -> const RationalFunction* {
      auto it = tr.x.find(x);
      return it == tr.x.end() ? nullptr : &it->second;
    };
    RationalFunction unit = one, prod = one;
    for (const auto& u : rel.unit_term) {
      auto p = get(u);
      if (!p) {
        e.status = tr.budget_hit ? "budget_exceeded" : "missing";
        return;
      }
      unit *= *p;
    }
    for (const auto& [u, k] : rel.product_term) {
      auto p = get(u);
      if (!p) {
        e.status = tr.budget_hit ? "budget_exceeded" : "missing";
        return;
      }
      prod *= p->pow(k);
    }
    RationalFunction lhs = *get(rel.lhs_minus) * *get(rel.lhs_plus), rhs;
    if (coeff) {
      auto it = tr.y.find(c);
      if (it == tr.y.end()) {
        e.status = "missing";
        return;
      }
      RationalFunction p(it->second.num()), q(it->second.den());
      rhs = (p * prod + q * unit) / RationalFunction(it->second.num() + it->second.den());
    } else {
      rhs = unit + prod;
    }
    e.status = lhs == rhs ? "pass" : "fail";
    if (full || e.status == "fail") {
      e.lhs = lhs.to_string();
      e.rhs = rhs.to_string();
    }
  });
  return rep;
}

Report verify_y(const RunTrace& tr, bool full) {
  Report rep;
  rep.name = "Y-system";
  if (tr.opt.mode == SeedMode::Trivial) return rep;
  std::vector<TYIndex> centers;
  for (const auto& [k, v] : tr.y) {
    const int da = tr.cd.d[k.a];
    if (!tr.y.count({k.a, k.m, k.n + 2 * da})) continue;
    TYIndex c{k.a, k.m, k.n + da};
    YRelation rel = y_relation(c, tr.cd, tr.level);
    bool ok = std::all_of(rel.denominator.begin(), rel.denominator.end(), [&](auto& u) { return in_window(tr, u); });
    for (const auto& [u, m] : rel.numerator) ok = ok && in_window(tr, u);
    if (ok) centers.push_back(c);
  }

  // Factor Y, 1 + Y and 1 + 1/Y for every label.  The second pass reuses the
  // full pool so that factorizations do not depend on visiting order.
  struct Fy {
    Factored y, onep, onepinv;
  };
  std::map<TYIndex, Fy> fy;
  FactorPool pool;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& [k, v] : tr.y) {
      Factored n = pool.factor(v.num()), d = pool.factor(v.den()), s = pool.factor(v.num() + v.den());
      Fy& e = fy[k];
      e = Fy{};
      e.y.add(n, 1);
      e.y.add(d, -1);
      e.onep.add(s, 1);
      e.onep.add(d, -1);
      e.onepinv.add(s, 1);
      e.onepinv.add(n, -1);
    }

  rep.entries.resize(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    const TYIndex& c = centers[i];
    CheckEntry& e = rep.entries[i];
    YRelation rel = y_relation(c, tr.cd, tr.level);
    e.relation = "Y" + str(rel.lhs_minus) + "*Y" + str(rel.lhs_plus);
    auto get = [&](const TYIndex& x) -> const SemifieldElement* {
      auto it = tr.y.find(x);
      return it == tr.y.end() ? nullptr : &it->second;
    };
    for (const auto& [u, k] : rel.numerator)
      if (!get(u)) {
        e.status = tr.budget_hit ? "budget_exceeded" : "missing";
        return;
      }
    for (const auto& u : rel.denominator)
      if (!get(u)) {
        e.status = tr.budget_hit ? "budget_exceeded" : "missing";
        return;
      }

    Factored fl, fr;
    fl.add(fy.at(rel.lhs_minus).y, 1);
    fl.add(fy.at(rel.lhs_plus).y, 1);
    for (const auto& [u, k] : rel.numerator) fr.add(fy.at(u).onep, k);
    for (const auto& u : rel.denominator) fr.add(fy.at(u).onepinv, -1);
    if (fl.same(fr) && !full) {
      e.status = "pass";
      return;
    }

    // Expanded and division free:
    //   n1 n2 prod d_u^k prod (n_v + d_v) == d1 d2 prod (n_u + d_u)^k prod n_v
    Polynomial left = get(rel.lhs_minus)->num() * get(rel.lhs_plus)->num();
    Polynomial right = get(rel.lhs_minus)->den() * get(rel.lhs_plus)->den();
    for (const auto& [u, k] : rel.numerator) {
      auto p = get(u);
      left *= p->den().pow(k);
      right *= (p->num() + p->den()).pow(k);
    }
    for (const auto& u : rel.denominator) {
      auto p = get(u);
      left *= p->num() + p->den();
      right *= p->num();
    }
    e.status = left == right ? "pass" : "fail";
    if (full || e.status == "fail") {
      e.lhs = left.to_string();
      e.rhs = right.to_string();
    }
  });
  return rep;
}

Report verify_laurent(const RunTrace& tr) {
  Report rep;
  rep.name = "Laurent";
  std::vector<const std::pair<const TYIndex, RationalFunction>*> xs;
  for (const auto& kv : tr.x) xs.push_back(&kv);
  rep.entries.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    rep.entries[i].relation = "x" + str(xs[i]->first);
    rep.entries[i].status = is_laurent(xs[i]->second, tr.xvars) ? "pass" : "fail";
  });
  return rep;
}

Report verify_periodicity(const Construction& c, bool rank2) {
  Report rep;
  rep.name = "periodicity";
  const int t = c.schedule.t;
  AnnotatedQuiver q = c.q0;
  for (int p = 0; p < 2 * t; ++p) {
    const auto& S = c.schedule.batch[p];
    CheckEntry e{"batch " + std::to_string(p) + " commutes", "pass", "", ""};
    try {
      q = composite_mutate(q, S);
    } catch (const Error& ex) {
      e.status = "fail";
      e.lhs = ex.what();
      rep.entries.push_back(e);
      return rep;
    }
    rep.entries.push_back(e);
    if (rank2) {
      bool opp = (p + 1) % 2 == 1;
      AnnotatedQuiver w = transform(c.q0, rank2_wp(t, p + 1), opp);
      rep.entries.push_back({"Q(" + std::to_string(p + 1) + "/" + std::to_string(t) + ") = w_" +
                                 std::to_string(p + 1) + "(Q(0))" + (opp ? "^op" : ""),
                             q.same_matrix(w) ? "pass" : "fail", "", ""});
    }
  }
  rep.entries.push_back({"cycle of " + std::to_string(2 * t) + " batches closes", q == c.q0 ? "pass" : "fail", "", ""});
  return rep;
}

Report verify_structure(const Construction& c, int level) {
  Report rep;
  rep.name = "structure";
  const CartanData& cd = c.ext.cd;
  const int t = c.schedule.t;
  ParityContext ctx = ParityContext::tree(cd, c.sc);
  std::vector<std::optional<TYIndex>> held(c.q0.size());
  for (int v = 0; v < c.q0.size(); ++v) {
    const auto& l = c.q0.label(v);
    for (int p = 0; p < 2 * t && !held[v]; ++p)
      if (std::binary_search(c.schedule.batch[p].begin(), c.schedule.batch[p].end(), v))
        held[v] = TYIndex{l.a, l.m, p - cd.d[l.a]};
    if (!held[v]) rep.entries.push_back({"vertex " + c.q0.name(v) + " is mutated", "fail", "", ""});
  }
  if (!rep.ok()) return rep;
  AnnotatedQuiver q = c.q0;
  for (int n = 0; n < 4 * t; ++n) {
    const auto& S = c.schedule.at(n);
    try {
      check_commuting(q, S);
    } catch (const Error& ex) {
      rep.entries.push_back({"batch " + std::to_string(n) + " commutes", "fail", ex.what(), ""});
      return rep;
    }
    for (int v : S) {
      const auto& l = c.q0.label(v);
      TYIndex want{l.a, l.m, n - cd.d[l.a]};
      CheckEntry e{"mutation at " + c.q0.name(v) + ", step " + std::to_string(n), "pass", "", ""};
      if (*held[v] != want) {
        e.status = "fail";
        e.lhs = "holds " + str(*held[v]) + ", expected " + str(want);
      } else if (!parity(want, ParityKind::Qp, ctx)) {
        e.status = "fail";
        e.lhs = str(want) + " violates Q+";
      } else {
        Relation rel = t_relation({l.a, l.m, n}, cd, level);
        std::map<TYIndex, int> in, out, unit;
        for (const auto& u : rel.unit_term) ++unit[u];
        for (int w = 0; w < q.size(); ++w) {
          int b = q.b(w, v);
          if (b > 0) in[*held[w]] += b;
          else if (b < 0) out[*held[w]] -= b;
        }
        if (in != rel.product_term || out != unit) {
          e.status = "fail";
          e.lhs = "neighbours do not match the T-relation at " + str({l.a, l.m, n});
        }
      }
      rep.entries.push_back(e);
    }
    for (int v : S) q.mutate_in_place(v);
    for (int v : S) {
      const auto& l = c.q0.label(v);
      held[v] = TYIndex{l.a, l.m, n + cd.d[l.a]};
    }
    if ((n + 1) % (2 * t) == 0)
      rep.entries.push_back({"period ending at step " + std::to_string(n + 1) + " closes", q == c.q0 ? "pass" : "fail", "", ""});
  }
  return rep;
}

}  // namespace cty
