#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cty/cartan.hpp"

namespace cty {

// (a, m, u) with n = t*u; a is 0-based.
struct TYIndex {
  int a = 0, m = 1, n = 0;
  auto operator<=>(const TYIndex&) const = default;
};

std::string to_string(const TYIndex& i);

bool in_range(const TYIndex& i, const CartanData& cd, int level);
void require_range(const TYIndex& i, const CartanData& cd, int level);  // throws IndexOutOfRange

struct SFactor {
  TYIndex idx;
  bool unit;  // boundary T_0 or T_{t_b l}
};

std::vector<SFactor> s_factors(const CartanData& cd, int level, int b, int m, int n);
// Boundary entries are dropped.
std::vector<TYIndex> z_factors(const CartanData& cd, int level, int b, int p, int m, int n);

// T(lhs_minus) T(lhs_plus) = prod(unit_term) + prod(product_term^exp)
struct Relation {
  TYIndex center, lhs_minus, lhs_plus;
  std::vector<TYIndex> unit_term;
  std::map<TYIndex, int> product_term;
};

// Y(lhs_minus) Y(lhs_plus) = prod(1 + Y(num)) / prod(1 + Y(den)^-1)
struct YRelation {
  TYIndex center, lhs_minus, lhs_plus;
  std::map<TYIndex, int> numerator;
  std::vector<TYIndex> denominator;
};

Relation t_relation(const TYIndex& idx, const CartanData& cd, int level);
YRelation y_relation(const TYIndex& idx, const CartanData& cd, int level);

// Exponent of T(bkv) in the product term of the relation centered at amu.
int g_exponent(const TYIndex& bkv, const TYIndex& amu, const CartanData& cd, int level);

enum class ParityKind { Pp, Pm, PPp, PPm, Qp, Qm, QPp, QPm, pp, pm };

// Accepts "P+", "P-", "P'+", "P'-", "Q+", ..., "p+", "p-".  Throws UnknownKind.
ParityKind parse_parity_kind(std::string_view s);

struct ParityContext {
  std::vector<int> d;
  std::vector<int> sign;
  // For p+/p-: batches[q] lists the quiver vertices mutated at step q mod size.
  const std::vector<std::vector<int>>* batches = nullptr;

  // Rank-2 data for [[2,-1],[-t,2]]: the P family.
  static ParityContext rank2(int t);
  static ParityContext tree(const CartanData& cd, const SignColoring& sc);
};

// P and Q families read (a, m, n) against the context's d and signs (they
// coincide: P is Q for the rank-2 sign choice).  p+/p- read idx.a as a quiver
// vertex index and idx.n as the step; idx.m is ignored.
bool parity(const TYIndex& idx, ParityKind kind, const ParityContext& ctx);

}  // namespace cty
