#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hyperdev/hypergraph.hpp"

namespace hyperdev {

// k-term progressions {x, x+d, ..., x+(k-1)d} on Z/NZ, one edge per
// parameter pair (x, d) with d in {1..(N-1)/2}. h = N(N-1)/2. For k = 3 the
// parametrization is injective on vertex sets; for k >= 4 coinciding sets
// stay as multi-edges.
inline Hypergraph build_kap(int N, int k) {
  if (!is_prime(N)) throw config_error("build_kap: N must be prime");
  if (k < 3 || N <= k) throw config_error("build_kap: need N > k >= 3");
  Hypergraph H;
  H.N = N;
  H.k = k;
  H.edges.reserve(static_cast<size_t>(N) * (N - 1) / 2);
  for (int x = 0; x < N; ++x) {
    for (int d = 1; d <= (N - 1) / 2; ++d) {
      std::vector<int> f(k);
      for (int i = 0; i < k; ++i) f[i] = static_cast<int>((x + static_cast<long long>(i) * d) % N);
      std::sort(f.begin(), f.end());
      H.edges.push_back(std::move(f));
    }
  }
  return H;
}

// Triples {x, y, x+y} of distinct nonzero residues mod N. Vertices are the
// N-1 nonzero residues, with residue r stored as index r-1. Each such set
// satisfies exactly one defining relation, so enumerating unordered pairs
// x < y yields every edge once.
inline Hypergraph build_schur(int N) {
  if (!is_prime(N) || N < 7) throw config_error("build_schur: N must be a prime >= 7");
  Hypergraph H;
  H.N = N - 1;
  H.k = 3;
  for (int x = 1; x < N; ++x) {
    for (int y = x + 1; y < N; ++y) {
      int z = (x + y) % N;
      if (z == 0 || z == x || z == y) continue;
      std::vector<int> f = {x - 1, y - 1, z - 1};
      std::sort(f.begin(), f.end());
      H.edges.push_back(std::move(f));
    }
  }
  return H;
}

// Quadruples {x,y,z,t} of distinct residues mod N with x+y = z+t. Two
// distinct pairs with the same sum are automatically disjoint, and each
// 4-set splits into equal-sum pairs in exactly one way, so choosing two
// pairs per sum value covers every edge once: h = N * C((N-1)/2, 2).
inline Hypergraph build_sidon(int N) {
  if (!is_prime(N) || N < 11) throw config_error("build_sidon: N must be a prime >= 11");
  Hypergraph H;
  H.N = N;
  H.k = 4;
  for (int s = 0; s < N; ++s) {
    // unordered pairs {a, b}, a != b, a + b = s mod N
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < N; ++a) {
      int b = (s - a % N + N) % N;
      if (a < b) pairs.emplace_back(a, b);
    }
    for (size_t i = 0; i < pairs.size(); ++i) {
      for (size_t j = i + 1; j < pairs.size(); ++j) {
        std::vector<int> f = {pairs[i].first, pairs[i].second, pairs[j].first, pairs[j].second};
        std::sort(f.begin(), f.end());
        H.edges.push_back(std::move(f));
      }
    }
  }
  return H;
}

// ----- linear systems Ax = 0 over Z/NZ -----

struct LinearSystemSpec {
  std::vector<std::vector<long long>> A;  // l rows, k columns
  int N = 0;                              // prime modulus
  bool exclude_zero = false;              // restrict solutions to nonzero entries,
                                          // vertices = {1..N-1} stored as index-1
  int rows() const { return static_cast<int>(A.size()); }
  int cols() const { return A.empty() ? 0 : static_cast<int>(A[0].size()); }
};

namespace detail {

inline long long mod_pow(long long b, long long e, long long m) {
  long long r = 1;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

inline long long mod_inv(long long a, long long p) { return mod_pow((a % p + p) % p, p - 2, p); }

// Reduced row echelon form mod p; returns rank. Matrix entries end up in
// [0, p).
inline int rref_mod(std::vector<std::vector<long long>>& M, long long p) {
  int rows = static_cast<int>(M.size());
  int cols = rows ? static_cast<int>(M[0].size()) : 0;
  for (auto& row : M)
    for (auto& x : row) x = (x % p + p) % p;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (M[r][c] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    long long inv = mod_inv(M[rank][c], p);
    for (auto& x : M[rank]) x = x * inv % p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || M[r][c] == 0) continue;
      long long f = M[r][c];
      for (int cc = 0; cc < cols; ++cc)
        M[r][cc] = ((M[r][cc] - f * M[rank][cc]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<long long>> rref_copy(std::vector<std::vector<long long>> M,
                                                     long long p) {
  rref_mod(M, p);
  return M;
}

}  // namespace detail

// Checks the spec invariants; throws config_error naming the offending minor
// or pair.
inline void validate_linear_system(const LinearSystemSpec& spec) {
  int l = spec.rows(), k = spec.cols();
  if (!is_prime(spec.N)) throw config_error("linear system: N must be prime");
  if (l < 1 || k < 3 || l > k - 2) throw config_error("linear system: need 1 <= l <= k-2");
  for (const auto& row : spec.A)
    if (static_cast<int>(row.size()) != k) throw config_error("linear system: ragged matrix");
  // every l x l minor nonsingular
  for_each_subset(k, l, [&](const std::vector<int>& cols) {
    std::vector<std::vector<long long>> M(l, std::vector<long long>(l));
    for (int r = 0; r < l; ++r)
      for (int c = 0; c < l; ++c) M[r][c] = spec.A[r][cols[c]];
    if (detail::rref_mod(M, spec.N) < l) {
      std::string which;
      for (int c : cols) which += std::to_string(c) + ",";
      throw config_error("linear system: singular minor at columns " + which);
    }
  });
  // irredundancy: x_i = x_j must be independent of the rows
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      auto M = spec.A;
      std::vector<long long> e(k, 0);
      e[i] = 1;
      e[j] = -1;
      M.push_back(e);
      if (detail::rref_mod(M, spec.N) <= l)
        throw config_error("linear system: redundant pair (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
    }
  }
}

// Column permutations of A that preserve its row space mod N. Solution
// vectors with distinct entries fall into orbits of this group of size
// exactly |Aut|, and each orbit is one edge of the set family.
inline long long column_automorphism_count(const LinearSystemSpec& spec) {
  int k = spec.cols(), l = spec.rows();
  auto base = detail::rref_copy(spec.A, spec.N);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  long long n = 0;
  do {
    std::vector<std::vector<long long>> M(l, std::vector<long long>(k));
    for (int r = 0; r < l; ++r)
      for (int c = 0; c < k; ++c) M[r][c] = spec.A[r][perm[c]];
    if (detail::rref_copy(M, spec.N) == base) ++n;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n;
}

// Solution-set family of Ax = 0: k-subsets that are the entries of a
// solution vector with pairwise distinct entries. Enumeration substitutes
// the k-l free coordinates and solves the leading l x l block; vectors
// whose entries coincide are discarded. Each distinct-entry vector set is
// emitted (#vectors / |Aut|) times.
inline Hypergraph build_linear_system(const LinearSystemSpec& spec,
                                      long long budget = kDefaultBudget) {
  validate_linear_system(spec);
  const int l = spec.rows(), k = spec.cols(), N = spec.N;
  const int free_coords = k - l;
  {
    Int work = 1;
    for (int i = 0; i < free_coords; ++i) work *= N;
    if (work > budget) throw budget_error("linear system: N^(k-l) exceeds budget");
  }

  // invert the leading l x l block once: x_lead = -(B^-1 C) x_free
  std::vector<std::vector<long long>> M(l, std::vector<long long>(l + free_coords));
  for (int r = 0; r < l; ++r) {
    for (int c = 0; c < l; ++c) M[r][c] = spec.A[r][c];
    for (int c = 0; c < free_coords; ++c) M[r][l + c] = spec.A[r][l + c];
  }
  detail::rref_mod(M, N);  // leading block nonsingular, so left part becomes I
  // after reduction: x_r = -sum_c M[r][l+c] * x_free[c]

  std::map<std::vector<int>, long long> sets;
  std::vector<long long> xfree(free_coords, 0);
  std::vector<int> vec(k);
  while (true) {
    bool ok = true;
    for (int c = 0; c < free_coords; ++c) vec[l + c] = static_cast<int>(xfree[c]);
    for (int r = 0; r < l && ok; ++r) {
      long long v = 0;
      for (int c = 0; c < free_coords; ++c) v += M[r][l + c] * xfree[c];
      vec[r] = static_cast<int>(((-v) % N + N) % N);
    }
    std::vector<int> sorted_vec = vec;
    std::sort(sorted_vec.begin(), sorted_vec.end());
    ok = std::adjacent_find(sorted_vec.begin(), sorted_vec.end()) == sorted_vec.end();
    if (ok && spec.exclude_zero && sorted_vec[0] == 0) ok = false;
    if (ok) ++sets[sorted_vec];

    int c = free_coords - 1;
    while (c >= 0 && xfree[c] == N - 1) { xfree[c] = 0; --c; }
    if (c < 0) break;
    ++xfree[c];
  }

  long long aut = column_automorphism_count(spec);
  Hypergraph H;
  H.N = spec.exclude_zero ? N - 1 : N;
  H.k = k;
  for (const auto& [set, copies] : sets) {
    if (copies % aut != 0)
      throw check_failure("linear system: solution count not divisible by automorphism count");
    std::vector<int> f = set;
    if (spec.exclude_zero)
      for (auto& v : f) --v;
    for (long long c = 0; c < copies / aut; ++c) H.edges.push_back(f);
  }
  return H;
}

}  // namespace hyperdev
