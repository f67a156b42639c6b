#include "cty/seed.hpp"
#include <algorithm>

namespace cty {

Seed initial_seed(const AnnotatedQuiver& q, SeedMode mode) {
  const int n = q.size();
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  if (mode != SeedMode::Trivial)
    for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
  Seed s;
  s.Q = q;
  s.mode = mode;
  s.vars = make_vars(std::move(names));
  for (int i = 1; i <= n; ++i) {
    s.x.push_back(RationalFunction::variable(s.vars, "x" + std::to_string(i)));
    s.y.push_back(mode == SeedMode::Trivial ? SemifieldElement::one(s.vars)
                                            : SemifieldElement::generator(s.vars, "y" + std::to_string(i)));
  }
  return s;
}

void mutate_seed_in_place(Seed& s, int k) {
  const int n = s.Q.size();
  if (k < 0 || k >= n) throw Error(Errc::UnknownVertex, "vertex index " + std::to_string(k));
  const auto& Q = s.Q;
  RationalFunction plus = RationalFunction::constant(s.vars, 1), minus = plus;
  if (s.mode != SeedMode::CoefficientsOnly)
    for (int j = 0; j < n; ++j) {
      int e = Q.b(j, k);
      if (e > 0) plus *= s.x[j].pow(e);
      else if (e < 0) minus *= s.x[j].pow(-e);
    }
  if (s.mode == SeedMode::Trivial) {
    s.x[k] = (plus + minus) / s.x[k];
  } else {
    const SemifieldElement& yk = s.y[k];
    if (s.mode == SeedMode::WithCoefficients) {
      RationalFunction p(yk.num()), q(yk.den());
      s.x[k] = (p * plus + q * minus) / (RationalFunction(yk.num() + yk.den()) * s.x[k]);
    }

    SemifieldElement one_plus = SemifieldElement::one(s.vars) + yk;
    SemifieldElement frac = yk / one_plus;
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      int e = Q.b(k, i);
      if (e > 0) s.y[i] = s.y[i] * frac.pow(e);
      else if (e < 0) s.y[i] = s.y[i] * one_plus.pow(-e);
    }
    s.y[k] = yk.inverse();
  }
  s.Q.mutate_in_place(k);
}

Seed mutate_seed(const Seed& s, int k) {
  Seed r = s;
  mutate_seed_in_place(r, k);
  return r;
}

void composite_mutate_seed_in_place(Seed& s, const std::vector<int>& S) {
  check_commuting(s.Q, S);
  std::vector<int> v = S;
  std::sort(v.begin(), v.end());
  for (int k : v) mutate_seed_in_place(s, k);
}

Seed composite_mutate_seed(const Seed& s, const std::vector<int>& S) {
  Seed r = s;
  composite_mutate_seed_in_place(r, S);
  return r;
}

}  // namespace cty
