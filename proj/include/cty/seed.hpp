#pragma once

#include <vector>

#include "cty/poly.hpp"
#include "cty/quiver.hpp"

namespace cty {

// CoefficientsOnly evolves B and y and leaves x at the initial cluster.
enum class SeedMode { WithCoefficients, Trivial, CoefficientsOnly };

struct Seed {
  AnnotatedQuiver Q;
  VarSetPtr vars;  // x1..xN, then y1..yN unless trivial
  std::vector<RationalFunction> x;
  std::vector<SemifieldElement> y;
  SeedMode mode = SeedMode::WithCoefficients;

  friend bool operator==(const Seed& a, const Seed& b) {
    return a.mode == b.mode && a.Q == b.Q && a.x == b.x && a.y == b.y;
  }
};

Seed initial_seed(const AnnotatedQuiver& q, SeedMode mode);

void mutate_seed_in_place(Seed& s, int k);
Seed mutate_seed(const Seed& s, int k);
// Throws NonCommutingSet unless S is pairwise non-adjacent.
void composite_mutate_seed_in_place(Seed& s, const std::vector<int>& S);
Seed composite_mutate_seed(const Seed& s, const std::vector<int>& S);

}  // namespace cty
