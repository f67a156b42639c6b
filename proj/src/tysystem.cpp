#include "cty/tysystem.hpp"

#include <cstdlib>

namespace cty {

namespace {

int mod(int x, int m) { return ((x % m) + m) % m; }

}  // namespace

std::string to_string(const TYIndex& i) {
  return "(" + std::to_string(i.a + 1) + "," + std::to_string(i.m) + "," + std::to_string(i.n) + ")";
}

bool in_range(const TYIndex& i, const CartanData& cd, int level) {
  return i.a >= 0 && i.a < cd.r && i.m >= 1 && i.m <= cd.ta[i.a] * level - 1;
}

void require_range(const TYIndex& i, const CartanData& cd, int level) {
  if (!in_range(i, cd, level)) throw Error(Errc::IndexOutOfRange, to_string(i));
}

std::vector<SFactor> s_factors(const CartanData& cd, int level, int b, int m, int n) {
  const int db = cd.d[b], top = cd.ta[b] * level;
  const int mp = m / db, j = m % db;
  std::vector<SFactor> r;
  for (int k = 1; k <= j; ++k) {
    TYIndex x{b, mp + 1, n + j + 1 - 2 * k};
    r.push_back({x, x.m == 0 || x.m == top});
  }
  for (int k = 1; k <= db - j; ++k) {
    TYIndex x{b, mp, n + db - j + 1 - 2 * k};
    r.push_back({x, x.m == 0 || x.m == top});
  }
  return r;
}

std::vector<TYIndex> z_factors(const CartanData& cd, int level, int b, int p, int m, int n) {
  std::vector<TYIndex> r;
  for (int j = -p + 1; j <= p - 1; ++j)
    for (int k = 1; k <= p - std::abs(j); ++k) {
      TYIndex x{b, p * m + j, n + p - std::abs(j) + 1 - 2 * k};
      if (in_range(x, cd, level)) r.push_back(x);
    }
  return r;
}

Relation t_relation(const TYIndex& idx, const CartanData& cd, int level) {
  require_range(idx, cd, level);
  const int a = idx.a, m = idx.m, n = idx.n, da = cd.d[a];
  Relation rel;
  rel.center = idx;
  rel.lhs_minus = {a, m, n - da};
  rel.lhs_plus = {a, m, n + da};
  for (int mm : {m - 1, m + 1})
    if (in_range({a, mm, n}, cd, level)) rel.unit_term.push_back({a, mm, n});
  for (int b = 0; b < cd.r; ++b) {
    if (!cd.adjacent(a, b)) continue;
    if (da > 1) {
      if ((da * m) % cd.d[b] != 0) throw Error(Errc::InvalidParams, "diagram is not tamely laced");
      ++rel.product_term[{b, da * m / cd.d[b], n}];
    } else {
      for (const auto& f : s_factors(cd, level, b, m, n))
        if (!f.unit) ++rel.product_term[f.idx];
    }
  }
  return rel;
}

YRelation y_relation(const TYIndex& idx, const CartanData& cd, int level) {
  require_range(idx, cd, level);
  const int a = idx.a, m = idx.m, n = idx.n, da = cd.d[a];
  YRelation rel;
  rel.center = idx;
  rel.lhs_minus = {a, m, n - da};
  rel.lhs_plus = {a, m, n + da};
  for (int mm : {m - 1, m + 1})
    if (in_range({a, mm, n}, cd, level)) rel.denominator.push_back({a, mm, n});
  for (int b = 0; b < cd.r; ++b) {
    if (!cd.adjacent(a, b)) continue;
    if (da > 1) {
      if (da % cd.d[b] != 0) throw Error(Errc::InvalidParams, "diagram is not tamely laced");
      for (const auto& x : z_factors(cd, level, b, da / cd.d[b], m, n)) ++rel.numerator[x];
    } else if (m % cd.d[b] == 0) {
      TYIndex x{b, m / cd.d[b], n};
      if (in_range(x, cd, level)) ++rel.numerator[x];
    }
  }
  return rel;
}

int g_exponent(const TYIndex& bkv, const TYIndex& amu, const CartanData& cd, int level) {
  if (!in_range(bkv, cd, level) || !in_range(amu, cd, level)) return 0;
  if (!cd.adjacent(bkv.a, amu.a)) return 0;
  auto rel = t_relation(amu, cd, level);
  auto it = rel.product_term.find(bkv);
  return it == rel.product_term.end() ? 0 : it->second;
}

ParityKind parse_parity_kind(std::string_view s) {
  static const std::pair<const char*, ParityKind> table[] = {
      {"P+", ParityKind::Pp},   {"P-", ParityKind::Pm},   {"P'+", ParityKind::PPp}, {"P'-", ParityKind::PPm},
      {"Q+", ParityKind::Qp},   {"Q-", ParityKind::Qm},   {"Q'+", ParityKind::QPp}, {"Q'-", ParityKind::QPm},
      {"p+", ParityKind::pp},   {"p-", ParityKind::pm}};
  for (auto [name, k] : table)
    if (s == name) return k;
  throw Error(Errc::UnknownKind, std::string(s));
}

ParityContext ParityContext::rank2(int t) {
  if (t < 1) throw Error(Errc::InvalidParams, "t must be positive");
  ParityContext c;
  c.d = {t, 1};
  // odd t: vertex 1 behaves as I-, even t: both in I+
  c.sign = {t % 2 == 1 ? -1 : 1, 1};
  return c;
}

ParityContext ParityContext::tree(const CartanData& cd, const SignColoring& sc) {
  ParityContext c;
  c.d = cd.d;
  c.sign = sc.sign;
  return c;
}

bool parity(const TYIndex& idx, ParityKind kind, const ParityContext& ctx) {
  if (kind == ParityKind::pp || kind == ParityKind::pm) {
    if (!ctx.batches || ctx.batches->empty()) throw Error(Errc::UnknownKind, "p+/p- need a schedule");
    const auto& bs = *ctx.batches;
    int step = idx.n - (kind == ParityKind::pm ? 1 : 0);
    const auto& b = bs[mod(step, static_cast<int>(bs.size()))];
    for (int v : b)
      if (v == idx.a) return true;
    return false;
  }
  if (idx.a < 0 || idx.a >= static_cast<int>(ctx.d.size())) throw Error(Errc::IndexOutOfRange, to_string(idx));
  const int d = ctx.d[idx.a];
  const bool plus_vertex = ctx.sign[idx.a] > 0;
  auto base = [&](int n) {
    if (d % 2 == 1) return (mod(idx.m + n, 2) == 0) == plus_vertex;
    return (mod(n, 2) == 0) == plus_vertex;
  };
  switch (kind) {
    case ParityKind::Pp:
    case ParityKind::Qp: return base(idx.n);
    case ParityKind::Pm:
    case ParityKind::Qm: return !base(idx.n);
    case ParityKind::PPp:
    case ParityKind::QPp: return base(idx.n + d);
    case ParityKind::PPm:
    case ParityKind::QPm: return !base(idx.n + d);
    default: break;
  }
  throw Error(Errc::UnknownKind, "unhandled kind");
}

}  // namespace cty
