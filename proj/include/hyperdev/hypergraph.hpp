#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperdev/combinatorics.hpp"
#include "hyperdev/errors.hpp"
#include "hyperdev/rational.hpp"

namespace hyperdev {

inline constexpr long long kDefaultBudget = 10'000'000;

// k-uniform hypergraph on vertex set {0..N-1}. Edges form a parametrized
// family: the same vertex set may appear more than once and every copy
// counts. Values are immutable after construction and safe to share across
// threads; all queries are read-only.
struct Hypergraph {
  int N = 0;
  int k = 0;
  std::vector<std::vector<int>> edges;  // each sorted, k distinct vertices

  long long h() const { return static_cast<long long>(edges.size()); }

  // Per-vertex lists of edge indices; built on demand by callers that need
  // incremental counting (stored separately to keep the value type simple).
  std::vector<std::vector<int>> incidence() const {
    std::vector<std::vector<int>> inc(N);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
      for (int v : edges[e]) inc[v].push_back(e);
    return inc;
  }
};

inline void validate_edge(const Hypergraph& H, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != H.k)
    throw config_error("edge size != k");
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0 || f[i] >= H.N) throw config_error("vertex out of range");
    if (i > 0 && f[i] <= f[i - 1]) throw config_error("edge vertices must be sorted and distinct");
  }
}

inline Hypergraph make_hypergraph(int N, int k, std::vector<std::vector<int>> edges) {
  Hypergraph H;
  H.N = N;
  H.k = k;
  for (auto& f : edges) std::sort(f.begin(), f.end());
  H.edges = std::move(edges);
  for (const auto& f : H.edges) validate_edge(H, f);
  return H;
}

namespace detail {
inline std::vector<char> mask_of(int N, const std::vector<int>& B) {
  std::vector<char> in(N, 0);
  for (int v : B) {
    if (v < 0 || v >= N) throw config_error("vertex out of range");
    in[v] = 1;
  }
  return in;
}
}  // namespace detail

// Number of edges entirely inside B (with multiplicity).
inline long long count_induced(const Hypergraph& H, const std::vector<int>& B) {
  auto in = detail::mask_of(H.N, B);
  long long n = 0;
  for (const auto& f : H.edges) {
    bool all = true;
    for (int v : f)
      if (!in[v]) { all = false; break; }
    n += all;
  }
  return n;
}

// Sum over edges f of C(|f cap B|, j): partially-filled edges with
// multiplicity. j = k recovers the induced count, j = 0 gives h.
inline long long count_partial(const Hypergraph& H, const std::vector<int>& B, int j) {
  if (j < 0 || j > H.k) throw config_error("j out of range");
  auto in = detail::mask_of(H.N, B);
  auto C = pascal_table(H.k);
  long long n = 0;
  for (const auto& f : H.edges) {
    int hit = 0;
    for (int v : f) hit += in[v];
    n += C[hit][j];
  }
  return n;
}

// Mean of the partial count over a uniformly random m-subset:
// h * C(k,j) * (m)_j / (N)_j, exact.
inline Rat expected_partial(long long N, long long k, long long h, long long j, long long m) {
  if (j < 0 || j > k) throw config_error("j out of range");
  if (m < 0 || m > N) throw config_error("m out of range");
  Rat out(Int(h) * binom(k, j) * falling(m, j), falling(N, j));
  return out;
}

// Number of edges containing every vertex of A (with multiplicity).
inline long long degree(const Hypergraph& H, const std::vector<int>& A) {
  if (static_cast<int>(A.size()) > H.k) throw config_error("|A| > k");
  auto in = detail::mask_of(H.N, A);
  long long n = 0;
  for (const auto& f : H.edges) {
    int hit = 0;
    for (int v : f) hit += in[v];
    n += (hit == static_cast<int>(A.size()));
  }
  return n;
}

// --- edge-list file format: header "k N h", then h lines of k indices ---

inline void write_edge_list(std::ostream& os, const Hypergraph& H) {
  os << H.k << ' ' << H.N << ' ' << H.h() << '\n';
  for (const auto& f : H.edges) {
    for (size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
    os << '\n';
  }
}

inline Hypergraph read_edge_list(std::istream& is) {
  long long k = 0, N = 0, h = 0;
  if (!(is >> k >> N >> h)) throw config_error("edge list: bad header");
  if (k < 1 || N < 1 || h < 0) throw config_error("edge list: header values out of range");
  Hypergraph H;
  H.N = static_cast<int>(N);
  H.k = static_cast<int>(k);
  H.edges.reserve(static_cast<size_t>(h));
  for (long long e = 0; e < h; ++e) {
    std::vector<int> f(static_cast<size_t>(k));
    for (auto& v : f)
      if (!(is >> v)) throw config_error("edge list: truncated at edge " + std::to_string(e));
    std::sort(f.begin(), f.end());
    validate_edge(H, f);
    H.edges.push_back(std::move(f));
  }
  int extra;
  if (is >> extra) throw config_error("edge list: more edges than header declares");
  return H;
}

}  // namespace hyperdev
