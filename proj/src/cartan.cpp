#include "cty/cartan.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace cty {

namespace {

// 2-colouring of an adjacency list restricted to `keep`; empty when an odd cycle exists.
std::vector<int> two_color(const std::vector<std::vector<int>>& adj, const std::vector<bool>& keep) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> c(n, -1);
  for (int s = 0; s < n; ++s) {
    if (!keep[s] || c[s] >= 0) continue;
    c[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (!keep[w]) continue;
        if (c[w] < 0) {
          c[w] = 1 - c[v];
          q.push(w);
        } else if (c[w] == c[v]) {
          return {};
        }
      }
    }
  }
  return c;
}

}  // namespace

CartanData validate_cartan(const IntMatrix& m, std::vector<std::string> names) {
  const int r = static_cast<int>(m.size());
  if (r == 0) throw Error(Errc::NotCartan, "empty matrix");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != r) throw Error(Errc::NotCartan, "matrix is not square");
  for (int i = 0; i < r; ++i) {
    if (m[i][i] != 2) throw Error(Errc::NotCartan, "diagonal entry " + std::to_string(i + 1) + " is not 2");
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      if (m[i][j] > 0) throw Error(Errc::NotCartan, "positive off-diagonal entry");
      if ((m[i][j] == 0) != (m[j][i] == 0)) throw Error(Errc::NotCartan, "zero pattern is not symmetric");
    }
  }

  // d_i C_ij = d_j C_ji, propagated as fractions num/den per component.
  std::vector<long long> num(r, 0), den(r, 1);
  std::vector<int> comp(r, -1);
  int ncomp = 0;
  for (int s = 0; s < r; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = ncomp;
    num[s] = 1;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (int j = 0; j < r; ++j) {
        if (j == i || m[i][j] == 0) continue;
        if (comp[j] >= 0) continue;
        comp[j] = ncomp;
        // d_j = d_i * C_ij / C_ji
        long long n2 = num[i] * -m[i][j], d2 = den[i] * -m[j][i];
        long long g = std::gcd(n2, d2);
        num[j] = n2 / g;
        den[j] = d2 / g;
        q.push(j);
      }
    }
    ++ncomp;
  }
  std::vector<int> d(r);
  for (int c = 0; c < ncomp; ++c) {
    long long L = 1;
    for (int i = 0; i < r; ++i)
      if (comp[i] == c) L = std::lcm(L, den[i]);
    long long G = 0;
    for (int i = 0; i < r; ++i)
      if (comp[i] == c) G = std::gcd(G, num[i] * (L / den[i]));
    for (int i = 0; i < r; ++i)
      if (comp[i] == c) d[i] = static_cast<int>(num[i] * (L / den[i]) / G);
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (static_cast<long long>(d[i]) * m[i][j] != static_cast<long long>(d[j]) * m[j][i])
        throw Error(Errc::NotSymmetrizable, "cycle ratios are inconsistent");

  CartanData cd;
  cd.r = r;
  cd.C = m;
  cd.d = d;
  cd.t = 1;
  for (int x : d) cd.t = std::lcm(cd.t, x);
  for (int x : d) cd.ta.push_back(cd.t / x);
  if (names.empty())
    for (int i = 0; i < r; ++i) names.push_back(std::to_string(i + 1));
  if (static_cast<int>(names.size()) != r) throw Error(Errc::InvalidParams, "name count differs from rank");
  cd.names = std::move(names);
  return cd;
}

bool is_tamely_laced(const CartanData& cd) {
  for (int i = 0; i < cd.r; ++i)
    for (int j = 0; j < cd.r; ++j)
      if (i != j && cd.C[i][j] < -1 && (cd.d[i] != 1 || cd.C[j][i] != -1)) return false;
  return true;
}

bool DynkinGraph::connected() const {
  if (d.empty()) return true;
  std::vector<bool> seen(d.size(), false);
  std::vector<int> st{0};
  seen[0] = true;
  std::size_t cnt = 1;
  while (!st.empty()) {
    int v = st.back();
    st.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++cnt;
        st.push_back(w);
      }
  }
  return cnt == d.size();
}

bool DynkinGraph::bipartite() const {
  return !two_color(adj, std::vector<bool>(d.size(), true)).empty() || d.empty();
}

DynkinGraph dynkin_graph(const CartanData& cd) {
  DynkinGraph g;
  g.d = cd.d;
  g.adj.resize(cd.r);
  for (int a = 0; a < cd.r; ++a)
    for (int b = a + 1; b < cd.r; ++b) {
      if (!cd.adjacent(a, b)) continue;
      int mult = std::max(-cd.C[a][b], -cd.C[b][a]);
      int toward = mult > 1 ? (cd.d[a] < cd.d[b] ? a : b) : -1;
      g.edges.push_back({a, b, mult, toward});
      g.adj[a].push_back(b);
      g.adj[b].push_back(a);
    }
  return g;
}

BlockDecomposition analyze_blocks(const CartanData& cd) {
  DynkinGraph g = dynkin_graph(cd);
  if (!g.connected()) throw Error(Errc::Decomposable, "Dynkin diagram is not connected");
  BlockDecomposition bd;
  bd.block_of.assign(cd.r, -1);
  for (int s = 0; s < cd.r; ++s) {
    if (cd.d[s] % 2 != 0 || bd.block_of[s] >= 0) continue;
    int id = static_cast<int>(bd.even_blocks.size());
    std::vector<int> blk{s};
    bd.block_of[s] = id;
    for (std::size_t h = 0; h < blk.size(); ++h)
      for (int w : g.adj[blk[h]])
        if (bd.block_of[w] < 0 && cd.d[w] == cd.d[s]) {
          bd.block_of[w] = id;
          blk.push_back(w);
        }
    std::sort(blk.begin(), blk.end());
    std::vector<bool> keep(cd.r, false);
    for (int v : blk) keep[v] = true;
    bd.block_bipartite.push_back(!two_color(g.adj, keep).empty());
    bd.even_blocks.push_back(std::move(blk));
  }

  // X'(C): one vertex per block (at its first member's position) and per odd vertex.
  bd.shrunk_vertex.assign(cd.r, -1);
  std::vector<int> block_vertex(bd.even_blocks.size(), -1);
  for (int v = 0; v < cd.r; ++v) {
    int b = bd.block_of[v];
    if (b >= 0 && block_vertex[b] >= 0) {
      bd.shrunk_vertex[v] = block_vertex[b];
      continue;
    }
    int id = static_cast<int>(bd.shrunken.d.size());
    bd.shrunk_vertex[v] = id;
    if (b >= 0) block_vertex[b] = id;
    bd.shrunken.d.push_back(cd.d[v]);
    bd.shrunk_is_block.push_back(b >= 0);
  }
  bd.shrunken.adj.resize(bd.shrunken.d.size());
  for (const auto& e : g.edges) {
    if (bd.block_of[e.a] >= 0 && bd.block_of[e.a] == bd.block_of[e.b]) continue;
    int p = bd.shrunk_vertex[e.a], q = bd.shrunk_vertex[e.b];
    int toward = e.toward < 0 ? -1 : bd.shrunk_vertex[e.toward];
    bd.shrunken.edges.push_back({p, q, e.mult, toward});
    bd.shrunken.adj[p].push_back(q);
    bd.shrunken.adj[q].push_back(p);
  }
  bd.shrunken_bipartite = bd.shrunken.bipartite();
  return bd;
}

SignColoring sign_color(const CartanData& cd) {
  DynkinGraph g = dynkin_graph(cd);
  SignColoring sc;
  sc.sign.assign(cd.r, 0);
  sc.color.assign(cd.r, Color::None);
  for (int s = 0; s < cd.r; ++s) {
    if (sc.sign[s] != 0) continue;
    sc.sign[s] = 1;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (int b : g.adj[a]) {
        bool both_odd = cd.d[a] % 2 == 1 && cd.d[b] % 2 == 1;
        int want = both_odd ? -sc.sign[a] : sc.sign[a];
        if (sc.sign[b] == 0) {
          sc.sign[b] = want;
          q.push(b);
        } else if (sc.sign[b] != want) {
          throw Error(Errc::NoValidColoring, "sign conditions fail around vertex " + cd.names[b]);
        }
      }
    }
  }
  for (int s = 0; s < cd.r; ++s) {
    if (cd.d[s] % 2 != 0 || sc.color[s] != Color::None) continue;
    sc.color[s] = Color::Alpha;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (int b : g.adj[a]) {
        if (cd.d[b] % 2 != 0) continue;
        Color want = sc.color[a] == Color::Alpha ? Color::Beta : Color::Alpha;
        if (sc.color[b] == Color::None) {
          sc.color[b] = want;
          q.push(b);
        } else if (sc.color[b] != want) {
          throw Error(Errc::NoValidColoring, "even block around vertex " + cd.names[b] + " is not bipartite");
        }
      }
    }
  }
  return sc;
}

void check_sign_color(const CartanData& cd, const SignColoring& sc) {
  if (static_cast<int>(sc.sign.size()) != cd.r || static_cast<int>(sc.color.size()) != cd.r)
    throw Error(Errc::InvalidColoring, "size mismatch");
  for (int a = 0; a < cd.r; ++a) {
    if (sc.sign[a] != 1 && sc.sign[a] != -1) throw Error(Errc::InvalidColoring, "sign must be +1 or -1");
    if ((cd.d[a] % 2 == 0) != (sc.color[a] != Color::None))
      throw Error(Errc::InvalidColoring, "vertex " + cd.names[a] + " colored iff d is even");
  }
  for (int a = 0; a < cd.r; ++a)
    for (int b = a + 1; b < cd.r; ++b) {
      if (!cd.adjacent(a, b)) continue;
      bool both_odd = cd.d[a] % 2 == 1 && cd.d[b] % 2 == 1;
      std::string e = cd.names[a] + "-" + cd.names[b];
      if (both_odd && sc.sign[a] == sc.sign[b]) throw Error(Errc::InvalidColoring, "condition (I) at " + e);
      if (!both_odd && sc.sign[a] != sc.sign[b]) throw Error(Errc::InvalidColoring, "condition (II) at " + e);
      if (cd.d[a] % 2 == 0 && cd.d[b] % 2 == 0 && sc.color[a] == sc.color[b])
        throw Error(Errc::InvalidColoring, "condition (III) at " + e);
    }
}

ExtendedDiagram extend_diagram(const CartanData& cd) {
  BlockDecomposition bd = analyze_blocks(cd);
  struct V {
    int origin, sheet, bsheet;
  };
  auto suffix = [](int s) { return s > 0 ? std::string("+") : s < 0 ? std::string("-") : std::string(); };

  // Stage 1: double X'(C) if needed.  Block copies keep their sheet inside
  // the block and meet outside vertices on the other sheet.
  std::vector<V> v1;
  std::vector<std::pair<int, int>> e1;
  const bool dbl = !bd.shrunken_bipartite;
  std::vector<std::vector<int>> at(cd.r);
  for (int a = 0; a < cd.r; ++a)
    for (int s : dbl ? std::vector<int>{1, -1} : std::vector<int>{0}) {
      at[a].push_back(static_cast<int>(v1.size()));
      v1.push_back({a, s, 0});
    }
  for (int a = 0; a < cd.r; ++a)
    for (int b = a + 1; b < cd.r; ++b) {
      if (!cd.adjacent(a, b)) continue;
      if (!dbl) {
        e1.emplace_back(at[a][0], at[b][0]);
        continue;
      }
      bool same = bd.block_of[a] >= 0 && bd.block_of[a] == bd.block_of[b];
      e1.emplace_back(at[a][0], at[b][same ? 0 : 1]);
      e1.emplace_back(at[a][1], at[b][same ? 1 : 0]);
    }

  // Stage 2: replace each nonbipartite even block by its bipartite double.
  auto doubled = [&](int a) {
    int b = bd.block_of[a];
    return b >= 0 && !bd.block_bipartite[b];
  };
  std::vector<V> v2;
  std::vector<std::vector<int>> at2(v1.size());
  for (std::size_t p = 0; p < v1.size(); ++p)
    for (int s : doubled(v1[p].origin) ? std::vector<int>{1, -1} : std::vector<int>{0}) {
      at2[p].push_back(static_cast<int>(v2.size()));
      v2.push_back({v1[p].origin, v1[p].sheet, s});
    }
  std::vector<std::pair<int, int>> e2;
  for (auto [p, q] : e1) {
    int a = v1[p].origin, b = v1[q].origin;
    if (doubled(a) && doubled(b) && bd.block_of[a] == bd.block_of[b]) {
      e2.emplace_back(at2[p][0], at2[q][1]);
      e2.emplace_back(at2[p][1], at2[q][0]);
    } else {
      for (int x : at2[p])
        for (int y : at2[q]) e2.emplace_back(x, y);
    }
  }

  const int n = static_cast<int>(v2.size());
  IntMatrix C(n, std::vector<int>(n, 0));
  std::vector<std::string> names;
  ExtendedDiagram ed;
  for (int i = 0; i < n; ++i) {
    C[i][i] = 2;
    names.push_back(cd.names[v2[i].origin] + suffix(v2[i].sheet) + suffix(v2[i].bsheet));
    ed.origin.push_back(v2[i].origin);
    ed.sheet.push_back(v2[i].sheet);
    ed.block_sheet.push_back(v2[i].bsheet);
    ed.halved.push_back(v2[i].bsheet != 0);
  }
  for (auto [x, y] : e2) {
    C[x][y] = cd.C[v2[x].origin][v2[y].origin];
    C[y][x] = cd.C[v2[y].origin][v2[x].origin];
  }
  ed.cd = validate_cartan(C, std::move(names));
  return ed;
}

std::string format_matrix(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m[i].size(); ++j) os << (j ? "," : "") << m[i][j];
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace cty
