#include "cty/quiver.hpp"

#include <algorithm>
#include <cstdlib>
#include "json.hpp"
#include <sstream>

namespace cty {

AnnotatedQuiver::AnnotatedQuiver(std::vector<VertexLabel> labels, std::vector<int> sign, std::vector<CType> ctype,
                                 std::vector<std::string> names)
    : n_(static_cast<int>(labels.size())),
      B_(static_cast<std::size_t>(n_) * n_, 0),
      labels_(std::move(labels)),
      sign_(std::move(sign)),
      ctype_(std::move(ctype)),
      names_(std::move(names)) {
  if (static_cast<int>(sign_.size()) != n_ || static_cast<int>(ctype_.size()) != n_)
    throw Error(Errc::InvalidParams, "annotation sizes differ from vertex count");
  if (names_.empty())
    for (const auto& v : labels_)
      names_.push_back("(" + std::to_string(v.a + 1) + "," + std::to_string(v.k) + "," + std::to_string(v.m) + ")");
  for (int i = 0; i < n_; ++i)
    if (!index_.emplace(labels_[i], i).second) throw Error(Errc::InvalidParams, "duplicate vertex " + names_[i]);
}

void AnnotatedQuiver::add_arrow(int i, int j, int mult) {
  if (i == j) throw Error(Errc::InvalidParams, "loop at " + names_[i]);
  B_[static_cast<std::size_t>(i) * n_ + j] += mult;
  B_[static_cast<std::size_t>(j) * n_ + i] -= mult;
}

std::optional<int> AnnotatedQuiver::find(const VertexLabel& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int AnnotatedQuiver::index_of(const VertexLabel& v) const {
  auto i = find(v);
  if (!i)
    throw Error(Errc::UnknownVertex,
                "(" + std::to_string(v.a + 1) + "," + std::to_string(v.k) + "," + std::to_string(v.m) + ")");
  return *i;
}

void AnnotatedQuiver::mutate_in_place(int k) {
  if (k < 0 || k >= n_) throw Error(Errc::UnknownVertex, "vertex index " + std::to_string(k));
  const std::size_t n = n_;
  std::vector<int> in, out;  // B_ik > 0, B_kj > 0
  for (int i = 0; i < n_; ++i) {
    if (B_[i * n + k] > 0) in.push_back(i);
    if (B_[k * n + i] > 0) out.push_back(i);
  }
  // (|B_ik| B_kj + B_ik |B_kj|)/2 is nonzero only for i -> k -> j.
  for (int i : in)
    for (int j : out) {
      int c = B_[i * n + k] * B_[k * n + j];
      B_[i * n + j] += c;
      B_[j * n + i] -= c;
    }
  for (int i = 0; i < n_; ++i) {
    B_[i * n + k] = -B_[i * n + k];
    B_[k * n + i] = -B_[k * n + i];
  }
}

AnnotatedQuiver mutate_matrix(const AnnotatedQuiver& q, int k) {
  AnnotatedQuiver r = q;
  r.mutate_in_place(k);
  return r;
}

void check_commuting(const AnnotatedQuiver& q, const std::vector<int>& S) {
  for (int i : S)
    if (i < 0 || i >= q.size()) throw Error(Errc::UnknownVertex, "vertex index " + std::to_string(i));
  for (std::size_t x = 0; x < S.size(); ++x)
    for (std::size_t y = x + 1; y < S.size(); ++y)
      if (S[x] == S[y] || q.b(S[x], S[y]) != 0)
        throw Error(Errc::NonCommutingSet, q.name(S[x]) + " and " + q.name(S[y]));
}

AnnotatedQuiver composite_mutate(const AnnotatedQuiver& q, const std::vector<int>& S) {
  check_commuting(q, S);
  std::vector<int> s = S;
  std::sort(s.begin(), s.end());
  AnnotatedQuiver r = q;
  for (int k : s) r.mutate_in_place(k);
  return r;
}

AnnotatedQuiver transform(const AnnotatedQuiver& q, const std::vector<int>& w, bool opp, int owner) {
  const int t = static_cast<int>(w.size());
  std::vector<bool> hit(t + 1, false);
  for (int x : w) {
    if (x < 1 || x > t || hit[x]) throw Error(Errc::InvalidPermutation, "not a permutation of 1..t");
    hit[x] = true;
  }
  const int n = q.size();
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) {
    VertexLabel v = q.label(i);
    if (v.a == owner) {
      if (v.k > t) throw Error(Errc::InvalidPermutation, "column outside 1..t");
      v.k = w[v.k - 1];
    }
    auto j = q.find(v);
    if (!j) throw Error(Errc::InvalidPermutation, "image of " + q.name(i) + " is not a vertex");
    img[i] = *j;
  }
  AnnotatedQuiver r = q;
  const std::size_t N = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.B_[img[i] * N + img[j]] = opp ? -q.b(i, j) : q.b(i, j);
  return r;
}

std::string to_dot(const AnnotatedQuiver& q) {
  std::ostringstream os;
  os << "digraph Q {\n";
  for (int i = 0; i < q.size(); ++i)
    os << "  v" << i << " [label=\"" << q.name(i) << "[" << (q.sign(i) > 0 ? '+' : '-') << ","
       << (q.ctype(i) == CType::Open ? "o" : "b") << "]\"];\n";
  for (int i = 0; i < q.size(); ++i)
    for (int j = 0; j < q.size(); ++j)
      for (int c = 0; c < q.b(i, j); ++c) os << "  v" << i << " -> v" << j << ";\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const AnnotatedQuiver& q) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  j["sign"] = nlohmann::ordered_json::array();
  j["ctype"] = nlohmann::ordered_json::array();
  for (int i = 0; i < q.size(); ++i) {
    const auto& v = q.label(i);
    j["vertices"].push_back({{"name", q.name(i)}, {"a", v.a + 1}, {"k", v.k}, {"m", v.m}});
    j["sign"].push_back(q.sign(i) > 0 ? "+" : "-");
    j["ctype"].push_back(q.ctype(i) == CType::Open ? "o" : "b");
  }
  auto B = nlohmann::ordered_json::array();
  for (int i = 0; i < q.size(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int k = 0; k < q.size(); ++k) row.push_back(q.b(i, k));
    B.push_back(row);
  }
  j["B"] = B;
  return j.dump();
}

}  // namespace cty
