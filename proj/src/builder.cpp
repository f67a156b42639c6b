#include "cty/builder.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace cty {

namespace {

int mod(int x, int m) { return ((x % m) + m) % m; }

std::vector<int> rank2_batch(const AnnotatedQuiver& q, int t, int p) {
  auto pick = [&](int a, int s, std::initializer_list<int> ks) {
    std::vector<int> r;
    for (int i = 0; i < q.size(); ++i) {
      const auto& v = q.label(i);
      if (v.a != a || q.sign(i) != s) continue;
      if (a == 0 && std::find(ks.begin(), ks.end(), v.k) == ks.end()) continue;
      r.push_back(i);
    }
    return r;
  };
  std::vector<int> b, c;
  if (t % 2 == 1) {
    if (p < t) {
      b = pick(1, p % 2 == 0 ? 1 : -1, {});
      c = pick(0, 1, {p % 2 == 0 ? p + 1 : t - p});
    } else {
      b = pick(1, p % 2 == 0 ? 1 : -1, {});
      c = pick(0, -1, {p % 2 == 0 ? 2 * t - p : p + 1 - t});
    }
  } else if (p % 2 == 1) {
    b = pick(1, -1, {});
  } else {
    b = pick(1, 1, {});
    c = p < t ? pick(0, 1, {p + 1, t - p}) : pick(0, -1, {p + 1 - t, 2 * t - p});
  }
  b.insert(b.end(), c.begin(), c.end());
  std::sort(b.begin(), b.end());
  return b;
}

std::string vname(const CartanData& cd, const VertexLabel& v) {
  return "(" + cd.names[v.a] + "," + std::to_string(v.k) + "," + std::to_string(v.m) + ")";
}

// Accumulates the pieces Q(a,b) of the patching step.
struct Patch {
  const CartanData& cd;
  std::map<VertexLabel, int> sign;
  std::map<VertexLabel, CType> ctype;
  std::map<std::pair<VertexLabel, VertexLabel>, int> arrows;
  std::map<std::pair<VertexLabel, VertexLabel>, int> intra;

  void put(const VertexLabel& v, int s, CType c) {
    auto [it, fresh] = sign.emplace(v, s);
    if (!fresh && it->second != s)
      throw Error(Errc::InvalidColoring, "pieces disagree on the sign of " + vname(cd, v));
    ctype.emplace(v, c);
  }

  // Arrows inside one column are shared between pieces; arrows between
  // columns are added.
  void emit(const AnnotatedQuiver& piece, const std::function<VertexLabel(const VertexLabel&)>& name, bool reverse) {
    for (int i = 0; i < piece.size(); ++i)
      for (int j = 0; j < piece.size(); ++j) {
        int n = reverse ? -piece.b(i, j) : piece.b(i, j);
        if (n <= 0) continue;
        VertexLabel P = name(piece.label(i)), R = name(piece.label(j));
        if (P.a == R.a && P.k == R.k) {
          auto key = std::make_pair(P, R);
          auto it = intra.find(key);
          if (it != intra.end()) {
            if (it->second != n) throw Error(Errc::InvalidColoring, "column arrows clash at " + vname(cd, P));
            continue;
          }
          if (intra.count({R, P})) throw Error(Errc::InvalidColoring, "column arrows clash at " + vname(cd, P));
          intra[key] = n;
        }
        arrows[{P, R}] += n;
      }
  }
};

}  // namespace

AnnotatedQuiver rank2_quiver(int t, int level) {
  if (t < 1 || level < 2) throw Error(Errc::InvalidParams, "need t >= 1 and level >= 2");
  std::vector<VertexLabel> labels;
  std::vector<int> sign;
  std::vector<CType> ct;
  std::vector<std::string> names;
  for (int k = 1; k <= t; ++k)
    for (int i = 1; i < level; ++i) {
      labels.push_back({0, k, i});
      sign.push_back((k + i) % 2 == 1 ? 1 : -1);
      ct.push_back(CType::Open);
      names.push_back("(" + std::to_string(k) + "," + std::to_string(i) + ")");
    }
  for (int j = 1; j < t * level; ++j) {
    labels.push_back({1, 1, j});
    sign.push_back(j % 2 == 1 ? 1 : -1);
    ct.push_back(CType::Filled);
    names.push_back("(" + std::to_string(t + 1) + "," + std::to_string(j) + ")");
  }
  AnnotatedQuiver q(labels, sign, ct, names);
  auto L = [&](int k, int i) { return q.index_of({0, k, i}); };
  auto R = [&](int j) { return q.index_of({1, 1, j}); };
  // left columns: from the + end of each vertical edge
  for (int k = 1; k <= t; ++k)
    for (int i = 1; i + 1 < level; ++i) {
      if (q.sign(L(k, i)) > 0) q.add_arrow(L(k, i), L(k, i + 1));
      else q.add_arrow(L(k, i + 1), L(k, i));
    }
  // right column: from odd rows
  for (int j = 1; j + 1 < t * level; ++j) {
    if (j % 2 == 1) q.add_arrow(R(j), R(j + 1));
    else q.add_arrow(R(j + 1), R(j));
  }
  // fan of width w centered at row t*i'
  for (int k = 1; k <= t; ++k)
    for (int i = 1; i < level; ++i) {
      int w = i % 2 == 1 ? 2 * (t - k) + 1 : 2 * k - 1, h = (w - 1) / 2;
      for (int j = t * i - h; j <= t * i + h; ++j) {
        if (j % 2 == 1) q.add_arrow(L(k, i), R(j));
        else q.add_arrow(R(j), L(k, i));
      }
    }
  return q;
}

Schedule rank2_schedule(int t, int level) {
  AnnotatedQuiver q = rank2_quiver(t, level);
  Schedule s;
  s.t = t;
  for (int p = 0; p < 2 * t; ++p) s.batch.push_back(rank2_batch(q, t, p));
  return s;
}

std::vector<int> rank2_wp(int t, int p) {
  auto r = [&](int start) {
    std::vector<int> f(t);
    std::iota(f.begin(), f.end(), 1);
    for (int a = start; a < t; a += 2) std::swap(f[a - 1], f[a]);
    return f;
  };
  const std::vector<int> rp = r(2), rm = r(1);
  std::vector<int> w(t);
  std::iota(w.begin(), w.end(), 1);
  for (int q = p - 1; q >= 0; --q) {
    const auto& f = q % 2 == 0 ? rp : rm;
    for (auto& x : w) x = f[x - 1];
  }
  return w;
}

AnnotatedQuiver rank2_state(int t, int level, int steps) {
  AnnotatedQuiver q = rank2_quiver(t, level);
  Schedule s = rank2_schedule(t, level);
  for (int p = 0; p < mod(steps, 2 * t); ++p) q = composite_mutate(q, s.batch[p]);
  return q;
}

AnnotatedQuiver build_quiver(const CartanData& cd, const SignColoring& sc, int level, const std::vector<bool>& halved) {
  if (level < 2) throw Error(Errc::InvalidParams, "level must be at least 2");
  if (!is_tamely_laced(cd)) throw Error(Errc::InvalidParams, "matrix is not tamely laced");
  check_sign_color(cd, sc);
  if (cd.r == 1) {
    // A single vertex: one column of length t*l - 1 with alternating signs.
    std::vector<VertexLabel> labels;
    std::vector<int> sign;
    std::vector<std::string> names;
    const int n = cd.ta[0] * level;
    for (int j = 1; j < n; ++j) {
      labels.push_back({0, 1, j});
      sign.push_back(((j % 2 == 1) ? 1 : -1) * sc.sign[0]);
      names.push_back(vname(cd, {0, 1, j}));
    }
    AnnotatedQuiver q(labels, sign, std::vector<CType>(labels.size(), CType::Filled), names);
    for (int j = 0; j + 1 < q.size(); ++j) {
      if (q.sign(j) > 0) q.add_arrow(j, j + 1);
      else q.add_arrow(j + 1, j);
    }
    if (cd.d[0] != 1) throw Error(Errc::InvalidParams, "rank-1 symmetrizer must be 1");
    return q;
  }

  Patch P{cd, {}, {}, {}, {}};
  for (int x = 0; x < cd.r; ++x)
    for (int y = x + 1; y < cd.r; ++y) {
      if (!cd.adjacent(x, y)) continue;
      int a = cd.d[x] >= cd.d[y] ? x : y, b = a == x ? y : x;
      const int da = cd.d[a], db = cd.d[b];
      if (da == db) {
        if (da % 2 == 1) {
          if (sc.sign[a] > 0) std::swap(a, b);  // a in I-
        } else if (sc.color[a] != Color::Alpha) {
          std::swap(a, b);
        }
      }
      const int tp = da, lp = cd.t * level / da;
      if (db == 1) {
        int steps;
        bool flip_o, flip_b;
        if (da % 2 == 1) {
          steps = sc.sign[a] < 0 ? 0 : tp;
          flip_o = flip_b = sc.sign[a] > 0;
        } else if (sc.sign[a] > 0) {
          steps = sc.color[a] == Color::Alpha ? 0 : tp;
          flip_o = sc.color[a] != Color::Alpha;
          flip_b = false;
        } else {
          steps = sc.color[a] == Color::Alpha ? -1 : tp - 1;
          flip_o = sc.color[a] != Color::Alpha;
          flip_b = true;
        }
        AnnotatedQuiver piece = rank2_state(tp, lp, steps);
        auto name = [a, b](const VertexLabel& v) {
          return v.a == 0 ? VertexLabel{a, v.k, v.m} : VertexLabel{b, 1, v.m};
        };
        for (int i = 0; i < piece.size(); ++i) {
          bool left = piece.label(i).a == 0;
          int s = piece.sign(i) * (((left ? flip_o : flip_b)) ? -1 : 1);
          P.put(name(piece.label(i)), s, left ? CType::Open : CType::Filled);
        }
        P.emit(piece, name, false);
      } else {
        if (da != db) throw Error(Errc::InvalidParams, "adjacent vertices with distinct d > 1");
        AnnotatedQuiver piece = rank2_state(1, lp, 0);
        for (int k = 1; k <= da; ++k) {
          auto name = [a, b, k](const VertexLabel& v) {
            return v.a == 0 ? VertexLabel{a, k, v.m} : VertexLabel{b, k, v.m};
          };
          const bool std_piece = k % 2 == 1;
          for (int i = 0; i < piece.size(); ++i) {
            bool left = piece.label(i).a == 0;
            P.put(name(piece.label(i)), std_piece ? piece.sign(i) : -piece.sign(i), left ? CType::Open : CType::Filled);
          }
          P.emit(piece, name, !std_piece);
        }
      }
    }

  auto dropped = [&](const VertexLabel& v) {
    return !halved.empty() && halved[v.a] && v.k % 2 == 0;
  };
  std::vector<VertexLabel> labels;
  std::vector<int> sign;
  std::vector<CType> ct;
  std::vector<std::string> names;
  for (const auto& [v, s] : P.sign) {
    if (dropped(v)) continue;
    labels.push_back(v);
    sign.push_back(s);
    ct.push_back(P.ctype.at(v));
    names.push_back(vname(cd, v));
  }
  AnnotatedQuiver q(labels, sign, ct, names);
  for (const auto& [pr, n] : P.arrows) {
    if (dropped(pr.first) || dropped(pr.second)) continue;
    q.add_arrow(q.index_of(pr.first), q.index_of(pr.second), n);
  }
  return q;
}

Schedule build_schedule(const CartanData& cd, const SignColoring& sc, const AnnotatedQuiver& q0) {
  Schedule s;
  s.t = cd.t;
  s.batch.resize(2 * cd.t);
  for (int p = 0; p < 2 * cd.t; ++p) {
    auto& B = s.batch[p];
    for (int a = 0; a < cd.r; ++a) {
      const int da = cd.d[a], q = p % (2 * da);
      int sg = 0;
      std::vector<int> ks;
      if (da % 2 == 1) {
        if (q < da) {
          sg = 1;
          ks = {q % 2 == 0 ? q + 1 : da - q};
        } else {
          sg = -1;
          ks = {q % 2 == 0 ? 2 * da - q : q + 1 - da};
        }
      } else {
        int e = sc.sign[a] > 0 ? q : q - 1;
        if (e >= 0 && e % 2 == 0) {
          if (e < da) {
            sg = 1;
            ks = {e + 1, da - e};
          } else {
            sg = -1;
            ks = {e + 1 - da, 2 * da - e};
          }
        }
      }
      for (int i = 0; i < q0.size(); ++i) {
        const auto& v = q0.label(i);
        if (v.a == a && q0.sign(i) == sg && std::find(ks.begin(), ks.end(), v.k) != ks.end()) B.push_back(i);
      }
    }
    std::sort(B.begin(), B.end());
  }
  AnnotatedQuiver q = q0;
  for (const auto& B : s.batch) q = composite_mutate(q, B);
  return s;
}

Construction construct(const CartanData& cd, int level) {
  Construction c;
  c.ext = extend_diagram(cd);
  c.sc = sign_color(c.ext.cd);
  c.q0 = build_quiver(c.ext.cd, c.sc, level, c.ext.halved);
  c.schedule = build_schedule(c.ext.cd, c.sc, c.q0);
  return c;
}

Construction construct(const CartanData& cd, const SignColoring& sc, int level) {
  Construction c;
  c.ext.cd = cd;
  for (int a = 0; a < cd.r; ++a) {
    c.ext.origin.push_back(a);
    c.ext.sheet.push_back(0);
    c.ext.block_sheet.push_back(0);
    c.ext.halved.push_back(false);
  }
  c.sc = sc;
  c.q0 = build_quiver(cd, sc, level);
  c.schedule = build_schedule(cd, sc, c.q0);
  return c;
}

Construction rank2_construction(int t, int level) {
  if (t < 1) throw Error(Errc::InvalidParams, "t must be positive");
  CartanData cd = validate_cartan({{2, -1}, {-t, 2}});
  SignColoring sc = sign_color(cd);
  if (t % 2) sc.sign = {-1, 1};
  return construct(cd, sc, level);
}

Embedding::Embedding(const CartanData& cd, const AnnotatedQuiver& q0, const Schedule& s, EmbedKind kind)
    : d_(cd.d), t_(s.t), kind_(kind), table_(2 * s.t), back_(2 * s.t) {
  for (int p = 0; p < 2 * t_; ++p)
    for (int v : s.batch[p]) {
      const auto& l = q0.label(v);
      if (!table_[p].emplace(std::make_pair(l.a, l.m), v).second)
        throw Error(Errc::InvalidParams, "two columns of one vertex share a row in a batch");
      back_[p][v] = {l.a, l.m};
    }
}

std::optional<std::pair<int, int>> Embedding::try_forward(const TYIndex& i) const {
  if (i.a < 0 || i.a >= static_cast<int>(d_.size())) return std::nullopt;
  const int step = kind_ == EmbedKind::G ? i.n + d_[i.a] : i.n;
  const auto& tb = table_[mod(step, 2 * t_)];
  auto it = tb.find({i.a, i.m});
  if (it == tb.end()) return std::nullopt;
  return std::make_pair(it->second, step);
}

std::pair<int, int> Embedding::forward(const TYIndex& i) const {
  auto r = try_forward(i);
  if (!r) throw Error(Errc::ParityMismatch, to_string(i) + " is outside the domain");
  return *r;
}

TYIndex Embedding::inverse(int vertex, int n) const {
  const auto& b = back_[mod(n, 2 * t_)];
  auto it = b.find(vertex);
  if (it == b.end()) throw Error(Errc::ParityMismatch, "not a mutation point");
  auto [a, m] = it->second;
  return {a, m, kind_ == EmbedKind::G ? n - d_[a] : n};
}

VertexLabel rank2_gprime(int t, const TYIndex& i) {
  ParityContext ctx = ParityContext::rank2(t);
  if (i.a < 0 || i.a > 1 || !parity(i, ParityKind::PPp, ctx))
    throw Error(Errc::ParityMismatch, to_string(i) + " does not satisfy P'+");
  if (i.a == 1) return {1, 1, i.m};
  const int r = mod(t * i.m + i.n, 2 * t);
  if (r % 2 != 0) throw Error(Errc::ParityMismatch, to_string(i));
  const int j = r / 2;
  const int split = t % 2 == 1 ? (t - 1) / 2 : t / 2 - 1;
  return {0, j <= split ? 2 * j + 1 : 2 * t - 2 * j, i.m};
}

}  // namespace cty
