#pragma once

#include <string>
#include <vector>

#include "cty/error.hpp"

namespace cty {

using IntMatrix = std::vector<std::vector<int>>;

struct CartanData {
  int r = 0;
  IntMatrix C;
  std::vector<int> d;   // symmetrizer, B = DC symmetric
  int t = 1;            // lcm of d
  std::vector<int> ta;  // t / d_a
  std::vector<std::string> names;

  bool adjacent(int a, int b) const { return a != b && C[a][b] != 0; }
};

// Throws NotCartan / NotSymmetrizable.  Names default to "1".."r".
CartanData validate_cartan(const IntMatrix& m, std::vector<std::string> names = {});

// C_ij < -1 implies d_i = 1 and C_ji = -1.
bool is_tamely_laced(const CartanData& cd);

struct DynkinEdge {
  int a, b;
  int mult;     // max(|C_ab|, |C_ba|)
  int toward;   // arrow tip (the smaller-d end) when mult > 1, else -1
};

struct DynkinGraph {
  std::vector<int> d;
  std::vector<DynkinEdge> edges;
  std::vector<std::vector<int>> adj;  // neighbours, one entry per edge
  bool connected() const;
  bool bipartite() const;
};

DynkinGraph dynkin_graph(const CartanData& cd);

struct BlockDecomposition {
  std::vector<std::vector<int>> even_blocks;  // sorted vertex lists, ordered by first vertex
  std::vector<bool> block_bipartite;
  std::vector<int> block_of;  // -1 outside every block
  DynkinGraph shrunken;       // X'(C)
  std::vector<int> shrunk_vertex;      // X(C) vertex -> X'(C) vertex
  std::vector<bool> shrunk_is_block;   // X'(C) vertex is a shrunken block
  bool shrunken_bipartite = true;
};

// Throws Decomposable.
BlockDecomposition analyze_blocks(const CartanData& cd);

enum class Color { None = 0, Alpha = 1, Beta = 2 };

struct SignColoring {
  std::vector<int> sign;      // +1 / -1
  std::vector<Color> color;   // None exactly for odd d_a
};

// Conditions (I)-(III); throws NoValidColoring.
SignColoring sign_color(const CartanData& cd);
// Throws InvalidColoring with the first violated condition.
void check_sign_color(const CartanData& cd, const SignColoring& sc);

struct ExtendedDiagram {
  CartanData cd;
  std::vector<int> origin;       // vertex of the input diagram
  std::vector<int> sheet;        // 0, or +1/-1 from doubling X'(C)
  std::vector<int> block_sheet;  // 0, or +1/-1 from doubling a nonbipartite even block
  std::vector<bool> halved;      // lies in a doubled nonbipartite even block
};

ExtendedDiagram extend_diagram(const CartanData& cd);

std::string format_matrix(const IntMatrix& m);

}  // namespace cty
