#pragma once

#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <map>
#include <set>

#include "cty/cartan.hpp"
#include "cty/quiver.hpp"
#include "json.hpp"

namespace testsupport {

using cty::IntMatrix;

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(CTY_TEST_DATA) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return nlohmann::json::parse(in);
}

// Tamely laced matrix from vertex weights and an edge list.  An edge joins
// equal weights by a single line, or a weight-1 vertex to a heavier one.
inline IntMatrix cartan_from(const std::vector<int>& d, const std::vector<std::pair<int, int>>& edges) {
  const int r = static_cast<int>(d.size());
  IntMatrix c(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i) c[i][i] = 2;
  for (auto [a, b] : edges) {
    if (d[a] < d[b]) std::swap(a, b);
    c[a][b] = -1;
    c[b][a] = -d[a] / d[b];
  }
  return c;
}

inline bool compatible(int x, int y) { return x == y || x == 1 || y == 1; }

// Random tree on n vertices with d_a <= maxd; every edge is tamely laced.
inline IntMatrix random_tree(std::mt19937& rng, int n, int maxd) {
  std::uniform_int_distribution<int> dd(1, maxd);
  for (;;) {
    std::vector<int> d(n);
    for (int& x : d) x = dd(rng);
    std::vector<std::pair<int, int>> e;
    bool ok = true;
    for (int v = 1; v < n && ok; ++v) {
      std::vector<int> cand;
      for (int u = 0; u < v; ++u)
        if (compatible(d[u], d[v])) cand.push_back(u);
      if (cand.empty()) ok = false;
      else e.emplace_back(cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)], v);
    }
    if (ok) return cartan_from(d, e);
  }
}

// Random connected diagram (cycles allowed) with extra edges on top of a tree.
inline IntMatrix random_graph(std::mt19937& rng, int n, int maxd, int extra) {
  IntMatrix c = random_tree(rng, n, maxd);
  auto cd = cty::validate_cartan(c);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (c[a][b]) e.emplace_back(a, b);
  for (int k = 0; k < extra; ++k) {
    int a = pick(rng), b = pick(rng);
    if (a == b || c[a][b] || !compatible(cd.d[a], cd.d[b])) continue;
    e.emplace_back(a, b);
    c = cartan_from(cd.d, e);
  }
  return c;
}

inline IntMatrix permuted(const IntMatrix& c, const std::vector<int>& p) {
  IntMatrix o(c.size(), std::vector<int>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) o[p[i]][p[j]] = c[i][j];
  return o;
}

struct Picture {
  std::map<cty::VertexLabel, std::pair<int, char>> vertices;  // sign (0 = not drawn), ctype (0 = not drawn)
  std::map<std::pair<cty::VertexLabel, cty::VertexLabel>, int> arrows;
  std::set<cty::VertexLabel> encircled;
  bool has_encircled = false;
};

inline Picture from_quiver(const cty::AnnotatedQuiver& q) {
  Picture p;
  for (int i = 0; i < q.size(); ++i) {
    p.vertices[q.label(i)] = {q.sign(i), static_cast<char>(q.ctype(i))};
    for (int j = 0; j < q.size(); ++j)
      if (q.b(i, j) > 0) p.arrows[{q.label(i), q.label(j)}] = q.b(i, j);
  }
  return p;
}

// Fixture labels are 1-based; rank-2 pictures use (k, i) with k = t+1 for the
// shared column.  Printed arrows listed under "errata" are reversed when
// `corrected` is set.
inline Picture from_fixture(const nlohmann::json& f, bool corrected) {
  const bool rank2 = f.contains("t");
  auto lab = [&](const nlohmann::json& v) -> cty::VertexLabel {
    if (!rank2) return {v[0].get<int>() - 1, v[1].get<int>(), v[2].get<int>()};
    int t = f["t"], k = v[0];
    return k <= t ? cty::VertexLabel{0, k, v[1].get<int>()} : cty::VertexLabel{1, 1, v[1].get<int>()};
  };
  std::set<std::pair<cty::VertexLabel, cty::VertexLabel>> flip;
  if (corrected)
    for (const auto& e : f["errata"]) flip.insert({lab(e["printed"][0]), lab(e["printed"][1])});
  Picture p;
  for (const auto& v : f["vertices"]) {
    int s = v["sign"].is_null() ? 0 : (v["sign"] == "+" ? 1 : -1);
    char c = v.contains("ctype") && !v["ctype"].is_null() ? v["ctype"].get<std::string>()[0] : 0;
    p.vertices[lab(v["label"])] = {s, c};
    if (v.contains("encircled")) {
      p.has_encircled = true;
      if (v["encircled"].get<bool>()) p.encircled.insert(lab(v["label"]));
    }
  }
  for (const auto& a : f["arrows"]) {
    auto key = std::make_pair(lab(a[0]), lab(a[1]));
    if (flip.count(key)) std::swap(key.first, key.second);
    p.arrows[key] += a[2].get<int>();
  }
  return p;
}

// Compares vertex sets, drawn annotations and arrows.
inline int mismatches(const Picture& gen, const Picture& fig) {
  int bad = 0;
  if (gen.vertices.size() != fig.vertices.size()) ++bad;
  for (const auto& [v, ann] : fig.vertices) {
    auto it = gen.vertices.find(v);
    if (it == gen.vertices.end()) {
      ++bad;
      continue;
    }
    if (ann.first && ann.first != it->second.first) ++bad;
    if (ann.second && ann.second != it->second.second) ++bad;
  }
  if (gen.arrows != fig.arrows) ++bad;
  return bad;
}

inline cty::SignColoring coloring_from(const nlohmann::json& f) {
  cty::SignColoring sc;
  for (const auto& s : f["signs"]) sc.sign.push_back(s == "+" ? 1 : -1);
  for (const auto& c : f["colors"]) sc.color.push_back(c == "a" ? cty::Color::Alpha : c == "b" ? cty::Color::Beta : cty::Color::None);
  return sc;
}

}  // namespace testsupport
