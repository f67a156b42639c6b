#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cty/error.hpp"

namespace cty {

// Vertex (a, k, m): Dynkin vertex a (0-based), column k of a (1-based), row m.
// Rank-2 quivers use a = 0 for the t left columns and a = 1, k = 1 for the
// shared right column.
struct VertexLabel {
  int a = 0, k = 1, m = 1;
  auto operator<=>(const VertexLabel&) const = default;
};

enum class CType : char { Open = 'o', Filled = 'b' };

class AnnotatedQuiver {
 public:
  AnnotatedQuiver() = default;
  AnnotatedQuiver(std::vector<VertexLabel> labels, std::vector<int> sign, std::vector<CType> ctype,
                  std::vector<std::string> names = {});

  int size() const { return n_; }
  int b(int i, int j) const { return B_[static_cast<std::size_t>(i) * n_ + j]; }
  // Adds `mult` arrows i -> j (B_ij += mult, B_ji -= mult).
  void add_arrow(int i, int j, int mult = 1);

  const VertexLabel& label(int i) const { return labels_[i]; }
  const std::vector<VertexLabel>& labels() const { return labels_; }
  int sign(int i) const { return sign_[i]; }
  CType ctype(int i) const { return ctype_[i]; }
  const std::string& name(int i) const { return names_[i]; }
  void set_sign(int i, int s) { sign_[i] = s; }

  std::optional<int> find(const VertexLabel& v) const;
  int index_of(const VertexLabel& v) const;  // throws UnknownVertex

  void mutate_in_place(int k);
  bool same_matrix(const AnnotatedQuiver& o) const { return n_ == o.n_ && B_ == o.B_; }
  const std::vector<int>& matrix() const { return B_; }

  friend bool operator==(const AnnotatedQuiver& x, const AnnotatedQuiver& y) {
    return x.B_ == y.B_ && x.labels_ == y.labels_ && x.sign_ == y.sign_ && x.ctype_ == y.ctype_;
  }

 private:
  friend AnnotatedQuiver transform(const AnnotatedQuiver&, const std::vector<int>&, bool, int);
  int n_ = 0;
  std::vector<int> B_;
  std::vector<VertexLabel> labels_;
  std::vector<int> sign_;
  std::vector<CType> ctype_;
  std::vector<std::string> names_;
  std::map<VertexLabel, int> index_;
};

AnnotatedQuiver mutate_matrix(const AnnotatedQuiver& q, int k);
// S must be pairwise non-adjacent; throws NonCommutingSet otherwise.
AnnotatedQuiver composite_mutate(const AnnotatedQuiver& q, const std::vector<int>& S);
void check_commuting(const AnnotatedQuiver& q, const std::vector<int>& S);

// Relabels the columns k of Dynkin vertex `owner` by w (w[k-1] = image of k,
// 1-based), keeping other columns fixed; reverses all arrows when opp.
AnnotatedQuiver transform(const AnnotatedQuiver& q, const std::vector<int>& w, bool opp, int owner = 0);

std::string to_dot(const AnnotatedQuiver& q);
std::string to_json(const AnnotatedQuiver& q);

}  // namespace cty
