#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cty/cartan.hpp"
#include "cty/quiver.hpp"
#include "cty/tysystem.hpp"

namespace cty {

struct Schedule {
  int t = 1;
  std::vector<std::vector<int>> batch;  // 2t batches of vertex indices, sorted
  const std::vector<int>& at(int n) const { return batch[((n % (2 * t)) + 2 * t) % (2 * t)]; }
};

// Vertices (k, i') of the left columns are labeled {0, k, i'}; the shared
// right column (t+1, j) is {1, 1, j}.
AnnotatedQuiver rank2_quiver(int t, int level);
Schedule rank2_schedule(int t, int level);
// w_p = r+ r- r+ ... (p factors, rightmost first); w[k-1] is the image of k.
std::vector<int> rank2_wp(int t, int p);
// Quiver after `steps` forward batches of the rank-2 schedule (any integer).
AnnotatedQuiver rank2_state(int t, int level, int steps);

// Patched quiver for a tamely laced diagram whose sign/coloring is valid.
// Vertices in `halved` keep only their odd-indexed columns.
AnnotatedQuiver build_quiver(const CartanData& cd, const SignColoring& sc, int level,
                             const std::vector<bool>& halved = {});
// Throws NonCommutingSet if a batch is not pairwise non-adjacent when applied.
Schedule build_schedule(const CartanData& cd, const SignColoring& sc, const AnnotatedQuiver& q0);

// Full pipeline for an arbitrary tamely laced indecomposable matrix.
struct Construction {
  ExtendedDiagram ext;
  SignColoring sc;
  AnnotatedQuiver q0;
  Schedule schedule;
};
Construction construct(const CartanData& cd, int level);
// Tree/rank-2 pipeline with explicit coloring (no extension).
Construction construct(const CartanData& cd, const SignColoring& sc, int level);
// [[2,-1],[-t,2]] with the figure conventions: vertex 0 has d = t, and for
// odd t it is the negative one.
Construction rank2_construction(int t, int level);

enum class EmbedKind { G, GPrime };

// g : (a,m,n) -> (vertex, n + d_a),  g' : (a,m,n) -> (vertex, n).
class Embedding {
 public:
  Embedding(const CartanData& cd, const AnnotatedQuiver& q0, const Schedule& s, EmbedKind kind);
  std::pair<int, int> forward(const TYIndex& i) const;  // throws ParityMismatch
  TYIndex inverse(int vertex, int n) const;             // throws ParityMismatch
  std::optional<std::pair<int, int>> try_forward(const TYIndex& i) const;
  EmbedKind kind() const { return kind_; }

 private:
  std::vector<int> d_;
  int t_;
  EmbedKind kind_;
  std::vector<std::map<std::pair<int, int>, int>> table_;  // step -> (a,m) -> vertex
  std::vector<std::map<int, std::pair<int, int>>> back_;   // step -> vertex -> (a,m)
};

// Closed-form rank-2 g' (a = 0 is the d=t vertex): column label {0,k,m} or {1,1,m}.
// Throws ParityMismatch outside the domain.
VertexLabel rank2_gprime(int t, const TYIndex& i);

}  // namespace cty
