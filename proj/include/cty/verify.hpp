#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cty/builder.hpp"
#include "cty/seed.hpp"

namespace cty {

struct RunOptions {
  // Label window [nmin, nmax] in n = t*u; must contain 0.  Seeds nmin..nmax
  // are computed.
  int nmin = 0, nmax = 0;
  SeedMode mode = SeedMode::Trivial;
  std::size_t budget = 0;  // max terms (num + den) of a produced entry; 0 = unlimited
  bool keep_quivers = false;
};

struct RunTrace {
  CartanData cd;  // the (extended) diagram the labels refer to
  int level = 2;
  RunOptions opt;
  VarSetPtr vars;
  std::vector<std::string> xvars;
  std::map<TYIndex, RationalFunction> x;  // via g, labels inside the window
  std::map<TYIndex, SemifieldElement> y;  // via g', labels inside the window
  std::map<int, AnnotatedQuiver> quivers;  // seed n -> quiver, when kept
  std::vector<std::string> conflicts;      // one variable received two different labels
  int unlabeled = 0;                       // mutation points without a label
  bool budget_hit = false;
  int reached_min = 0, reached_max = 0;    // steps actually computed
};

RunTrace run(const Construction& c, int level, const RunOptions& opt);

struct CheckEntry {
  std::string relation;
  std::string status;  // pass | fail | missing | budget_exceeded
  std::string lhs, rhs;
};

struct Report {
  std::string name;
  std::vector<CheckEntry> entries;
  int count(const std::string& status) const;
  bool ok() const;  // no fail/missing entries
  std::string to_json(bool full = false) const;
  std::string summary() const;
};

// Worker count: CLUSTER_TY_THREADS if set, else hardware concurrency.
unsigned worker_threads();

// T-relations whose two LHS labels lie in the trace and whose right-hand
// labels lie in the window.  Trivial traces check the coefficient-free
// relation, with-coefficients traces the y-dressed one.
Report verify_t(const RunTrace& tr, bool full = false);
// Same selection for Y.  The comparison is cross-multiplied, so lhs/rhs in
// the entries are the two polynomial sides after clearing denominators.
Report verify_y(const RunTrace& tr, bool full = false);
// Laurent property of every labeled x over the initial cluster.
Report verify_laurent(const RunTrace& tr);

// Batch commutation, closing of the 2t cycle, and for rank 2 the
// intermediate identifications Q(p/t) = w_p(Q(0)) (opposite for odd p).
Report verify_periodicity(const Construction& c, bool rank2 = false);

// Exchange structure along one period: at every mutation point the in- and
// out-neighbours carry exactly the labels of the T-relation's product and
// unit terms, and every mutated index satisfies Q+.
Report verify_structure(const Construction& c, int level);

}  // namespace cty
