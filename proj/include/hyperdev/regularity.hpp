#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "hyperdev/hypergraph.hpp"

namespace hyperdev {

// Degree statistics over all r-sets of vertices. avg_degree is always exact;
// max/min/eta are exact when `exact` is set and estimated from a sample
// otherwise (sample_seed records how the sample was drawn).
struct RegularityReport {
  int r = 0;
  Rat avg_degree = 0;
  long long max_degree = 0;
  long long min_degree = 0;
  Rat eta = 0;
  bool exact = true;
  unsigned long long sample_seed = 0;
  long long sampled_sets = 0;
};

namespace detail {

inline Rat eta_of(const Rat& avg, long long lo, long long hi) {
  if (avg == 0) return 0;
  Rat up = Rat(hi) / avg - 1;
  Rat dn = 1 - Rat(lo) / avg;
  return std::max(up, dn);
}

}  // namespace detail

// Exact mode walks the r-subsets of every edge (h * C(k,r) map updates) and
// compares the number of distinct r-sets seen against C(N,r); any unseen
// r-set has degree 0. Falls back to sampling r-sets when the walk would
// exceed the budget.
inline RegularityReport regularity_report(const Hypergraph& H, int r,
                                          long long budget = kDefaultBudget,
                                          unsigned long long seed = 0) {
  if (r < 0 || r > H.k) throw config_error("r out of range");
  RegularityReport rep;
  rep.r = r;
  Int nr = binom(H.N, r);
  rep.avg_degree = nr == 0 ? Rat(0) : Rat(Int(H.h()) * binom(H.k, r), nr);

  Int work = Int(H.h()) * binom(H.k, r);
  if (work <= budget) {
    std::map<std::vector<int>, long long> deg;
    std::vector<int> key(r);
    for (const auto& f : H.edges) {
      for_each_subset(H.k, r, [&](const std::vector<int>& idx) {
        for (int i = 0; i < r; ++i) key[i] = f[idx[i]];
        ++deg[key];
      });
    }
    long long hi = 0, lo = 0;
    for (const auto& [_, d] : deg) hi = std::max(hi, d);
    if (Int(static_cast<long long>(deg.size())) < nr) {
      lo = 0;  // some r-set is in no edge
    } else {
      lo = hi;
      for (const auto& [_, d] : deg) lo = std::min(lo, d);
    }
    rep.max_degree = hi;
    rep.min_degree = lo;
    rep.eta = detail::eta_of(rep.avg_degree, lo, hi);
    return rep;
  }

  // Sampled mode: degrees of uniformly random r-sets, flagged approximate.
  rep.exact = false;
  rep.sample_seed = seed;
  auto inc = H.incidence();
  std::mt19937_64 eng(seed);
  long long n_samples = std::max<long long>(1000, budget / std::max(1, H.k));
  n_samples = std::min<long long>(n_samples, 200000);
  rep.sampled_sets = n_samples;
  long long hi = 0, lo = -1;
  std::vector<int> A(r);
  for (long long t = 0; t < n_samples; ++t) {
    // floyd-style distinct sampling
    std::vector<int> chosen;
    for (int i = H.N - r; i < H.N; ++i) {
      int x = static_cast<int>(eng() % static_cast<unsigned long long>(i + 1));
      if (std::find(chosen.begin(), chosen.end(), x) != chosen.end()) x = i;
      chosen.push_back(x);
    }
    A = chosen;
    std::sort(A.begin(), A.end());
    // degree via the incidence list of the least-covered vertex
    long long d = 0;
    if (r == 0) {
      d = H.h();
    } else {
      int pivot = A[0];
      for (int v : A)
        if (inc[v].size() < inc[pivot].size()) pivot = v;
      for (int e : inc[pivot]) {
        const auto& f = H.edges[e];
        bool all = true;
        for (int v : A)
          if (!std::binary_search(f.begin(), f.end(), v)) { all = false; break; }
        d += all;
      }
    }
    hi = std::max(hi, d);
    lo = lo < 0 ? d : std::min(lo, d);
  }
  rep.max_degree = hi;
  rep.min_degree = std::max<long long>(lo, 0);
  rep.eta = detail::eta_of(rep.avg_degree, rep.min_degree, rep.max_degree);
  return rep;
}

// Edges through x with x removed, relabeled onto {0..N-2} by closing the gap.
inline Hypergraph link(const Hypergraph& H, int x) {
  if (x < 0 || x >= H.N) throw config_error("vertex out of range");
  Hypergraph L;
  L.N = H.N - 1;
  L.k = H.k - 1;
  for (const auto& f : H.edges) {
    if (!std::binary_search(f.begin(), f.end(), x)) continue;
    std::vector<int> g;
    g.reserve(f.size() - 1);
    for (int v : f)
      if (v != x) g.push_back(v > x ? v - 1 : v);
    L.edges.push_back(std::move(g));
  }
  return L;
}

}  // namespace hyperdev
