#include <algorithm>
#include <cstdlib>
#include <set>
#include <tuple>
#include <type_traits>

#include "cty/verify.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cty;
using nlohmann::json;
using testsupport::coloring_from;

namespace {

RunTrace run_rank2(int t, int level, int w, SeedMode mode, std::size_t budget = 0) {
  RunOptions o;
  o.nmin = -w;
  o.nmax = w;
  o.mode = mode;
  o.budget = budget;
  return run(rank2_construction(t, level), level, o);
}

const CheckEntry* find_entry(const Report& r, const std::string& name) {
  for (const auto& e : r.entries)
    if (e.relation == name) return &e;
  return nullptr;
}

// Relation name -> every label it mentions, for all in-range centers near
// the window.
template <class Rel>
std::map<std::string, std::set<TYIndex>> touched(const RunTrace& tr) {
  std::map<std::string, std::set<TYIndex>> r;
  for (int a = 0; a < tr.cd.r; ++a)
    for (int m = 1; m <= tr.cd.ta[a] * tr.level - 1; ++m)
      for (int n = tr.opt.nmin - tr.cd.t; n <= tr.opt.nmax + tr.cd.t; ++n) {
        std::set<TYIndex> s;
        std::string name;
        if constexpr (std::is_same_v<Rel, Relation>) {
          auto rel = t_relation({a, m, n}, tr.cd, tr.level);
          name = "T" + to_string(rel.lhs_minus) + "*T" + to_string(rel.lhs_plus);
          s = {rel.lhs_minus, rel.lhs_plus};
          s.insert(rel.unit_term.begin(), rel.unit_term.end());
          for (const auto& [u, k] : rel.product_term) s.insert(u);
        } else {
          auto rel = y_relation({a, m, n}, tr.cd, tr.level);
          name = "Y" + to_string(rel.lhs_minus) + "*Y" + to_string(rel.lhs_plus);
          s = {rel.lhs_minus, rel.lhs_plus};
          s.insert(rel.denominator.begin(), rel.denominator.end());
          for (const auto& [u, k] : rel.numerator) s.insert(u);
        }
        r[name] = s;
      }
  return r;
}

}  // namespace

TEST_CASE("run needs a window around n = 0") {
  auto c = rank2_construction(2, 2);
  RunOptions o;
  o.nmin = 1;
  o.nmax = 3;
  CHECK_THROWS_AS(run(c, 2, o), Error);
  o.nmin = 0;
  o.nmax = 0;
  auto tr = run(c, 2, o);
  CHECK(tr.conflicts.empty());
  // Nothing fits in a one-point window.
  CHECK(verify_t(tr).entries.empty());
}

TEST_CASE("rank-2 T-system and Laurent property, trivial coefficients") {
  for (int t = 1; t <= 3; ++t)
    for (int level = 2; level <= 3; ++level) {
      CAPTURE(t);
      CAPTURE(level);
      auto tr = run_rank2(t, level, 2 * t, SeedMode::Trivial);
      CHECK(tr.conflicts.empty());
      CHECK(tr.unlabeled == 0);
      auto r = verify_t(tr);
      CHECK(r.ok());
      CHECK(r.count("pass") == static_cast<int>(r.entries.size()));
      CHECK(r.count("pass") > 0);
      CHECK(verify_laurent(tr).ok());
    }
}

TEST_CASE("rank-2 Y-system over Q(y)") {
  for (int t = 1; t <= 3; ++t)
    for (int level = 2; level <= 3; ++level) {
      CAPTURE(t);
      CAPTURE(level);
      auto tr = run_rank2(t, level, 2 * t, SeedMode::CoefficientsOnly);
      CHECK(tr.conflicts.empty());
      auto r = verify_y(tr);
      CHECK(r.ok());
      CHECK(r.count("pass") > 0);
      CHECK(verify_t(tr).entries.empty());
    }
}

TEST_CASE("t = 5 worked Y relations over Q(y)") {
  RunOptions o;
  o.nmin = -4;
  o.nmax = 6;
  o.mode = SeedMode::CoefficientsOnly;
  auto tr = run(rank2_construction(5, 3), 3, o);
  auto r = verify_y(tr);
  CHECK(r.ok());
  // Y(1,2,.) only lives at even n, so the 25-factor relation is centered at n = 1.
  auto* big = find_entry(r, "Y(1,2,-4)*Y(1,2,6)");
  REQUIRE(big);
  CHECK(big->status == "pass");
  int factors = 0;
  for (const auto& [u, k] : y_relation({0, 2, 1}, tr.cd, 3).numerator) factors += k;
  CHECK(factors == 25);
  auto* small = find_entry(r, "Y(2,9,0)*Y(2,9,2)");
  REQUIRE(small);
  CHECK(small->status == "pass");
  auto rel = y_relation({1, 9, 1}, tr.cd, 3);
  CHECK(rel.numerator.empty());
  CHECK(rel.denominator == std::vector<TYIndex>{{1, 8, 1}, {1, 10, 1}});
}

TEST_CASE("y-dressed T-system at t = 2, level 2") {
  auto tr = run_rank2(2, 2, 4, SeedMode::WithCoefficients);
  auto r = verify_t(tr);
  CHECK(r.ok());
  CHECK(r.count("pass") > 0);
  CHECK(verify_y(tr).ok());
}

TEST_CASE("d = (1,3,3,3,1,1) tree at level 2") {
  auto f = testsupport::load_fixture("tree_t3_a.json");
  auto cd = validate_cartan(f["cartan"].get<IntMatrix>());
  auto c = construct(cd, coloring_from(f), 2);
  RunOptions o;
  o.nmin = -2 * cd.t;
  o.nmax = 2 * cd.t;
  auto tr = run(c, 2, o);
  CHECK(tr.conflicts.empty());
  auto r = verify_t(tr);
  CHECK(r.ok());
  CHECK(r.count("pass") > 0);
  CHECK(verify_laurent(tr).ok());
}

TEST_CASE("rank 1") {
  auto cd = validate_cartan({{2}});
  for (int level = 2; level <= 4; ++level) {
    auto c = construct(cd, level);
    RunOptions o;
    o.nmin = -3;
    o.nmax = 3;
    o.mode = SeedMode::WithCoefficients;
    auto tr = run(c, level, o);
    auto rt = verify_t(tr), ry = verify_y(tr);
    CHECK(rt.ok());
    CHECK(ry.ok());
    CHECK(rt.count("pass") > 0);
    CHECK(ry.count("pass") > 0);
  }
}

TEST_CASE("run agrees with plain seed mutation") {
  // Independent walk with mutate_seed_in_place, labeling y by g' before
  // each mutation and x after it.
  for (auto [t, level, mode] : {std::tuple{2, 3, SeedMode::WithCoefficients}, std::tuple{3, 2, SeedMode::CoefficientsOnly},
                                std::tuple{3, 3, SeedMode::Trivial}}) {
    CAPTURE(t);
    auto c = rank2_construction(t, level);
    const int w = 2 * t;
    auto tr = run_rank2(t, level, w, mode);
    Embedding gp(tr.cd, c.q0, c.schedule, EmbedKind::GPrime);
    Seed s = initial_seed(c.q0, mode);
    int nx = 0, ny = 0;
    for (int n = 0; n <= w; ++n) {
      const auto& S = c.schedule.at(n);
      for (int v : S) {
        auto i = gp.inverse(v, n);
        if (mode != SeedMode::Trivial && i.n <= w) {
          CHECK(tr.y.at(i) == s.y[v]);
          ++ny;
        }
      }
      composite_mutate_seed_in_place(s, S);
      for (int v : S) {
        const auto& l = c.q0.label(v);
        TYIndex i{l.a, l.m, n + tr.cd.d[l.a]};
        if (mode != SeedMode::CoefficientsOnly && i.n <= w) {
          CHECK(tr.x.at(i) == s.x[v]);
          ++nx;
        }
      }
    }
    CHECK(nx + ny > 0);
  }
}

TEST_CASE("a single corrupted x breaks exactly the relations that use it") {
  auto tr = run_rank2(2, 2, 4, SeedMode::Trivial);
  const TYIndex bad{1, 2, 0};
  REQUIRE(tr.x.count(bad));
  auto names = touched<Relation>(tr);
  auto clean = verify_t(tr);
  REQUIRE(clean.ok());
  tr.x.at(bad) *= RationalFunction::variable(tr.vars, "x1");
  auto r = verify_t(tr);
  REQUIRE(r.entries.size() == clean.entries.size());
  int fails = 0;
  for (const auto& e : r.entries) {
    CAPTURE(e.relation);
    const bool uses = names.at(e.relation).count(bad) > 0;
    CHECK((e.status == "fail") == uses);
    fails += uses;
    if (e.status == "fail") CHECK(!e.lhs.empty());
  }
  CHECK(fails >= 2);
}

TEST_CASE("a single corrupted y breaks exactly the relations that use it") {
  auto tr = run_rank2(2, 3, 4, SeedMode::CoefficientsOnly);
  const TYIndex bad{1, 3, 0};
  REQUIRE(tr.y.count(bad));
  auto names = touched<YRelation>(tr);
  tr.y.at(bad) = tr.y.at(bad) * tr.y.at(bad);
  auto r = verify_y(tr);
  int fails = 0;
  for (const auto& e : r.entries) {
    CAPTURE(e.relation);
    const bool uses = names.at(e.relation).count(bad) > 0;
    CHECK((e.status == "fail") == uses);
    fails += uses;
  }
  CHECK(fails >= 2);
}

TEST_CASE("worked exchange relations at t = 5, level 4") {
  // Both mutations happen at step 0 and every label involved is still an
  // initial variable there, so the relations can be checked on one step.
  const int t = 5, level = 4;
  auto c = rank2_construction(t, level);
  const auto& cd = c.ext.cd;
  Embedding g(cd, c.q0, c.schedule, EmbedKind::G), gp(cd, c.q0, c.schedule, EmbedKind::GPrime);
  const Seed s0 = initial_seed(c.q0, SeedMode::WithCoefficients);
  auto initial_x = [&](const TYIndex& i) {
    auto [v, step] = g.forward(i);
    // Not mutated strictly between 0 and the labeling step.
    for (int n = std::min(0, step); n < std::max(0, step); ++n) {
      const auto& S = c.schedule.at(n);
      REQUIRE(std::find(S.begin(), S.end(), v) == S.end());
    }
    return s0.x[v];
  };
  auto check = [&](const TYIndex& center) {
    CAPTURE(to_string(center));
    auto rel = t_relation(center, cd, level);
    auto [v, step] = g.forward(rel.lhs_minus);
    REQUIRE(step == 0);
    REQUIRE(gp.forward(center) == std::make_pair(v, 0));
    const auto one = RationalFunction::constant(s0.vars, 1);
    RationalFunction unit = one, prod = one;
    for (const auto& u : rel.unit_term) unit *= initial_x(u);
    for (const auto& [u, k] : rel.product_term) prod *= initial_x(u).pow(k);
    RationalFunction y = s0.y[v].value();
    RationalFunction expect = (y / (one + y) * prod + one / (one + y) * unit) / s0.x[v];
    Seed s = composite_mutate_seed(s0, c.schedule.at(0));
    CHECK(s.x[v] == expect);
    CHECK(g.forward(rel.lhs_plus) == std::make_pair(v, 2 * cd.d[center.a]));
  };
  auto r1 = t_relation({0, 2, 0}, cd, level);
  CHECK(r1.unit_term == std::vector<TYIndex>{{0, 1, 0}, {0, 3, 0}});
  CHECK(r1.product_term == std::map<TYIndex, int>{{{1, 10, 0}, 1}});
  check({0, 2, 0});
  auto r2 = t_relation({1, 9, 0}, cd, level);
  CHECK(r2.unit_term == std::vector<TYIndex>{{1, 8, 0}, {1, 10, 0}});
  CHECK(r2.product_term ==
        std::map<TYIndex, int>{{{0, 1, 0}, 1}, {{0, 2, -3}, 1}, {{0, 2, -1}, 1}, {{0, 2, 1}, 1}, {{0, 2, 3}, 1}});
  check({1, 9, 0});
}

TEST_CASE("2t batches forward then back restore the seed") {
  for (auto [t, mode] : {std::pair{1, SeedMode::WithCoefficients}, std::pair{2, SeedMode::WithCoefficients},
                         std::pair{3, SeedMode::CoefficientsOnly}, std::pair{4, SeedMode::Trivial}}) {
    CAPTURE(t);
    auto c = rank2_construction(t, 2);
    const Seed s0 = initial_seed(c.q0, mode);
    Seed s = s0;
    for (int p = 0; p < 2 * t; ++p) composite_mutate_seed_in_place(s, c.schedule.at(p));
    CHECK(s.Q == s0.Q);
    for (int p = 2 * t - 1; p >= 0; --p) composite_mutate_seed_in_place(s, c.schedule.at(p));
    CHECK(s == s0);
  }
}

TEST_CASE("periodicity and exchange structure") {
  for (int t = 1; t <= 5; ++t)
    for (int level = 2; level <= 3; ++level) {
      CAPTURE(t);
      CAPTURE(level);
      auto c = rank2_construction(t, level);
      CHECK(verify_periodicity(c, true).ok());
      CHECK(verify_structure(c, level).ok());
    }
  using testsupport::cartan_from;
  auto even_triangle = validate_cartan(cartan_from({1, 2, 1, 2, 2}, {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {3, 4}}));
  auto hexagon = validate_cartan(cartan_from({1, 2, 2, 1, 1, 1}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}));
  for (const auto& cd : {even_triangle, hexagon}) {
    auto c = construct(cd, 2);
    auto r = verify_periodicity(c);
    CHECK(r.ok());
    CHECK(r.count("pass") > 0);
  }
}

TEST_CASE("budget stops a run without failing relations") {
  auto full = verify_y(run_rank2(5, 2, 5, SeedMode::CoefficientsOnly));
  REQUIRE(full.ok());
  auto tr = run_rank2(5, 2, 8, SeedMode::CoefficientsOnly, 60);
  CHECK(tr.budget_hit);
  auto r = verify_y(tr);
  CHECK(r.count("fail") == 0);
  CHECK(r.count("missing") == 0);
  CHECK(r.ok());
}

TEST_CASE("report JSON") {
  auto tr = run_rank2(1, 2, 2, SeedMode::Trivial);
  auto r = verify_t(tr);
  auto j = json::parse(r.to_json());
  CHECK(j["name"] == "T-system");
  CHECK(j["ok"] == true);
  CHECK(j["summary"]["pass"] == r.count("pass"));
  CHECK(j["summary"]["fail"] == 0);
  REQUIRE(j["entries"].size() == r.entries.size());
  CHECK_FALSE(j["entries"][0].contains("lhs"));
  auto jf = json::parse(verify_t(tr, true).to_json(true));
  CHECK(jf["entries"][0].contains("lhs"));
  CHECK(r.summary() == "T-system: " + std::to_string(r.count("pass")) + " pass, 0 fail");
}

TEST_CASE("worker count does not change results") {
  auto tr = run_rank2(2, 3, 4, SeedMode::CoefficientsOnly);
  setenv("CLUSTER_TY_THREADS", "1", 1);
  CHECK(worker_threads() == 1);
  auto a = verify_y(tr).to_json(true);
  setenv("CLUSTER_TY_THREADS", "4", 1);
  CHECK(worker_threads() == 4);
  auto b = verify_y(tr).to_json(true);
  unsetenv("CLUSTER_TY_THREADS");
  CHECK(a == b);
}
