#include <algorithm>
#include <numeric>
#include <random>

#include "cty/cartan.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cty;
using testsupport::cartan_from;

namespace {

// Seven-vertex chain, d = 3,3,1,2,2,1,1.
IntMatrix chain7() {
  return {{2, -1, 0, 0, 0, 0, 0},  {-1, 2, -1, 0, 0, 0, 0}, {0, -3, 2, -2, 0, 0, 0}, {0, 0, -1, 2, -1, 0, 0},
          {0, 0, 0, -1, 2, -1, 0}, {0, 0, 0, 0, -2, 2, -1}, {0, 0, 0, 0, 0, -1, 2}};
}

// Left diagram of the first doubling figure: vertices 1..5, even triangle {2,4,5}.
IntMatrix even_triangle() { return cartan_from({1, 2, 1, 2, 2}, {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {3, 4}}); }
// Left diagram of the second doubling figure: a 6-cycle with even block {2,3}.
IntMatrix hexagon() {
  return cartan_from({1, 2, 2, 1, 1, 1}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
}

// Smallest positive integer D with DC symmetric, by exhaustive search.
std::vector<int> brute_symmetrizer(const IntMatrix& c, int bound) {
  const int r = static_cast<int>(c.size());
  std::vector<int> d(r, 1);
  for (;;) {
    bool sym = true;
    for (int i = 0; i < r && sym; ++i)
      for (int j = 0; j < r; ++j)
        if (d[i] * c[i][j] != d[j] * c[j][i]) sym = false;
    if (sym) return d;
    int k = 0;
    while (k < r && ++d[k] > bound) d[k++] = 1;
    if (k == r) return {};
  }
}

bool oracle_conditions(const CartanData& cd, const SignColoring& sc) {
  for (int a = 0; a < cd.r; ++a) {
    if ((cd.d[a] % 2 == 0) != (sc.color[a] != Color::None)) return false;
    for (int b = 0; b < cd.r; ++b) {
      if (!cd.adjacent(a, b)) continue;
      bool both_odd = cd.d[a] % 2 && cd.d[b] % 2;
      if (both_odd && sc.sign[a] == sc.sign[b]) return false;
      if (!both_odd && sc.sign[a] != sc.sign[b]) return false;
      if (cd.d[a] % 2 == 0 && cd.d[b] % 2 == 0 && sc.color[a] == sc.color[b]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("validate_cartan on the rank-2 family") {
  for (int t = 1; t <= 7; ++t) {
    auto cd = validate_cartan({{2, -1}, {-t, 2}});
    CHECK(cd.d == std::vector<int>{t, 1});
    CHECK(cd.t == t);
    CHECK(cd.ta == std::vector<int>{1, t});
  }
  auto one = validate_cartan({{2}});
  CHECK(one.d == std::vector<int>{1});
  CHECK(one.t == 1);
  CHECK(validate_cartan({{2, -1}, {-3, 2}}).d == std::vector<int>{3, 1});
}

TEST_CASE("validate_cartan rejects bad input") {
  auto code = [](const IntMatrix& m) {
    try {
      validate_cartan(m);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no throw");
    return Errc::Parse;
  };
  CHECK(code({{3}}) == Errc::NotCartan);
  CHECK(code({{2, 1}, {-1, 2}}) == Errc::NotCartan);
  CHECK(code({{2, -1}, {0, 2}}) == Errc::NotCartan);
  CHECK(code({{2, -1}}) == Errc::NotCartan);
  // Triangle whose ratios around the cycle multiply to 2.
  CHECK(code({{2, -1, -1}, {-2, 2, -1}, {-1, -1, 2}}) == Errc::NotSymmetrizable);
}

TEST_CASE("symmetrizer is the minimal one") {
  std::mt19937 rng(11);
  for (int it = 0; it < 60; ++it) {
    auto c = testsupport::random_graph(rng, 2 + it % 4, 4, 2);
    auto cd = validate_cartan(c);
    CHECK(cd.d == brute_symmetrizer(c, 4));
    CHECK(std::reduce(cd.d.begin(), cd.d.end(), 0, [](int x, int y) { return std::gcd(x, y); }) == 1);
    int l = 1;
    for (int x : cd.d) l = std::lcm(l, x);
    CHECK(cd.t == l);
  }
}

TEST_CASE("tamely laced test") {
  CHECK(is_tamely_laced(validate_cartan({{2, -1}, {-5, 2}})));
  CHECK_FALSE(is_tamely_laced(validate_cartan({{2, -2}, {-2, 2}})));
  CHECK(is_tamely_laced(validate_cartan({{2, -1}, {-1, 2}})));
  // B2 written with the double arrow the other way is still tamely laced.
  CHECK(is_tamely_laced(validate_cartan({{2, -2}, {-1, 2}})));
  // C_12 = -2 with d_1 = 2 violates the condition.
  CHECK_FALSE(is_tamely_laced(validate_cartan({{2, -2, 0}, {-1, 2, -2}, {0, -1, 2}})));
}

TEST_CASE("tamely laced test is invariant under relabeling") {
  std::mt19937 rng(5);
  std::vector<IntMatrix> cases = {{{2, -2, 0}, {-1, 2, -2}, {0, -1, 2}}, chain7(), even_triangle(), hexagon()};
  for (int i = 0; i < 20; ++i) cases.push_back(testsupport::random_graph(rng, 5, 4, 2));
  for (const auto& c : cases) {
    std::vector<int> p(c.size());
    std::iota(p.begin(), p.end(), 0);
    bool base = is_tamely_laced(validate_cartan(c));
    for (int k = 0; k < 5; ++k) {
      std::shuffle(p.begin(), p.end(), rng);
      CHECK(is_tamely_laced(validate_cartan(testsupport::permuted(c, p))) == base);
    }
  }
}

TEST_CASE("dynkin graph edges") {
  auto g = dynkin_graph(validate_cartan(chain7()));
  REQUIRE(g.edges.size() == 6);
  CHECK(g.edges[1].mult == 3);
  CHECK(g.edges[1].toward == 2);
  CHECK(g.edges[2].mult == 2);
  CHECK(g.edges[2].toward == 2);
  CHECK(g.edges[3].toward == -1);
  CHECK(g.connected());
  CHECK(g.bipartite());
}

TEST_CASE("even blocks") {
  SUBCASE("chain with a four-vertex even block") {
    auto cd = validate_cartan(cartan_from({1, 2, 2, 2, 2, 1}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}));
    auto bd = analyze_blocks(cd);
    REQUIRE(bd.even_blocks.size() == 1);
    CHECK(bd.even_blocks[0] == std::vector<int>{1, 2, 3, 4});
    CHECK(bd.block_bipartite[0]);
    CHECK(bd.shrunken.d.size() == 3);
    REQUIRE(bd.shrunken.edges.size() == 2);
    for (const auto& e : bd.shrunken.edges) {
      CHECK(e.mult == 2);
      CHECK(bd.shrunken.d[e.toward] == 1);
    }
    CHECK(bd.shrunken_bipartite);
  }
  SUBCASE("all odd") {
    auto cd = validate_cartan({{2, -1, 0}, {-3, 2, -3}, {0, -1, 2}});
    auto bd = analyze_blocks(cd);
    CHECK(bd.even_blocks.empty());
    CHECK(bd.shrunken.edges.size() == 2);
  }
  SUBCASE("even triangle") {
    auto bd = analyze_blocks(validate_cartan(even_triangle()));
    REQUIRE(bd.even_blocks.size() == 1);
    CHECK(bd.even_blocks[0] == std::vector<int>{1, 3, 4});
    CHECK_FALSE(bd.block_bipartite[0]);
    CHECK(bd.shrunken_bipartite);
  }
  SUBCASE("odd cycle after shrinking") {
    auto bd = analyze_blocks(validate_cartan(hexagon()));
    CHECK(bd.block_bipartite[0]);
    CHECK_FALSE(bd.shrunken_bipartite);
  }
  CHECK_THROWS_AS(analyze_blocks(validate_cartan({{2, 0}, {0, 2}})), Error);
}

TEST_CASE("sign_color on the decomposition example") {
  auto cd = validate_cartan(chain7());
  CHECK(cd.d == std::vector<int>{3, 3, 1, 2, 2, 1, 1});
  auto sc = sign_color(cd);
  CHECK(sc.sign == std::vector<int>{1, -1, 1, 1, 1, 1, -1});
  CHECK(sc.color[3] == Color::Alpha);
  CHECK(sc.color[4] == Color::Beta);
  CHECK(std::count(sc.color.begin(), sc.color.end(), Color::None) == 5);
  CHECK_NOTHROW(check_sign_color(cd, sc));
}

TEST_CASE("sign_color small cases") {
  auto one = sign_color(validate_cartan({{2}}));
  CHECK(one.sign == std::vector<int>{1});
  CHECK(one.color == std::vector<Color>{Color::None});
  CHECK(sign_color(validate_cartan({{2, -1}, {-1, 2}})).sign == std::vector<int>{1, -1});
  CHECK_THROWS_AS(sign_color(validate_cartan(even_triangle())), Error);
  CHECK_THROWS_AS(sign_color(validate_cartan(hexagon())), Error);
}

TEST_CASE("sign_color satisfies the conditions on random trees") {
  std::mt19937 rng(3);
  for (int it = 0; it < 200; ++it) {
    auto cd = validate_cartan(testsupport::random_tree(rng, 1 + it % 7, 4));
    auto sc = sign_color(cd);
    CHECK(oracle_conditions(cd, sc));
    CHECK(sc.sign[0] == 1);
  }
}

TEST_CASE("check_sign_color names the violated condition") {
  auto cd = validate_cartan(chain7());
  auto sc = sign_color(cd);
  auto bad = sc;
  bad.sign[1] = 1;
  CHECK_THROWS_WITH_AS(check_sign_color(cd, bad), doctest::Contains("(I)"), Error);
  bad = sc;
  bad.sign[3] = -1;
  CHECK_THROWS_WITH_AS(check_sign_color(cd, bad), doctest::Contains("(II)"), Error);
  bad = sc;
  bad.color[4] = Color::Alpha;
  CHECK_THROWS_WITH_AS(check_sign_color(cd, bad), doctest::Contains("(III)"), Error);
}

TEST_CASE("extend_diagram on the doubling examples") {
  SUBCASE("nonbipartite block") {
    auto ext = extend_diagram(validate_cartan(even_triangle()));
    CHECK(ext.cd.r == 8);
    CHECK(std::count(ext.halved.begin(), ext.halved.end(), true) == 6);
    CHECK(std::count(ext.origin.begin(), ext.origin.end(), 0) == 1);
    CHECK(std::count(ext.origin.begin(), ext.origin.end(), 1) == 2);
  }
  SUBCASE("nonbipartite shrunken diagram") {
    auto ext = extend_diagram(validate_cartan(hexagon()));
    CHECK(ext.cd.r == 12);
    CHECK(std::none_of(ext.halved.begin(), ext.halved.end(), [](bool h) { return h; }));
    for (int v = 0; v < 6; ++v) CHECK(std::count(ext.origin.begin(), ext.origin.end(), v) == 2);
  }
  SUBCASE("already bipartite") {
    auto cd = validate_cartan(chain7());
    auto ext = extend_diagram(cd);
    CHECK(ext.cd.C == cd.C);
    for (int v = 0; v < cd.r; ++v) CHECK(ext.origin[v] == v);
  }
}

TEST_CASE("extend_diagram properties on random diagrams") {
  std::mt19937 rng(17);
  int doubled = 0;
  for (int it = 0; it < 150; ++it) {
    auto cd = validate_cartan(testsupport::random_graph(rng, 3 + it % 5, 4, 4));
    auto ext = extend_diagram(cd);
    const auto& x = ext.cd;
    doubled += x.r > cd.r;
    CHECK(is_tamely_laced(x));
    auto bd = analyze_blocks(x);  // throws when disconnected
    CHECK(bd.shrunken_bipartite);
    for (bool b : bd.block_bipartite) CHECK(b);
    CHECK(oracle_conditions(x, sign_color(x)));
    // Every new edge lies over an old edge with the same entries, and every
    // old edge is covered.
    for (int i = 0; i < x.r; ++i) {
      CHECK(x.d[i] == cd.d[ext.origin[i]]);
      for (int j = 0; j < x.r; ++j)
        if (i != j && x.C[i][j]) CHECK(x.C[i][j] == cd.C[ext.origin[i]][ext.origin[j]]);
    }
    for (int a = 0; a < cd.r; ++a)
      for (int b = 0; b < cd.r; ++b) {
        if (!cd.adjacent(a, b)) continue;
        bool covered = false;
        for (int i = 0; i < x.r; ++i)
          for (int j = 0; j < x.r; ++j) covered |= ext.origin[i] == a && ext.origin[j] == b && x.adjacent(i, j);
        CHECK(covered);
      }
  }
  CHECK(doubled > 0);
}

TEST_CASE("format_matrix") { CHECK(format_matrix({{2, -1}, {-5, 2}}) == "[[2,-1],[-5,2]]"); }
