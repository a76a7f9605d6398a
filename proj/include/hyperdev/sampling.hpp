#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "hyperdev/hypergraph.hpp"

namespace hyperdev {

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent substream: one engine per (master seed, stream index) pair.
// Single-word mt19937_64 seeding is fully specified by the standard, so
// results are identical across platforms and thread counts.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
  return std::mt19937_64(splitmix64(s));
}

// Unbiased uniform draw from {0..n-1} by rejection; avoids the
// implementation-defined std::uniform_int_distribution.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
  if (n == 0) throw config_error("uniform_below: n must be positive");
  if ((n & (n - 1)) == 0) return eng() & (n - 1);
  std::uint64_t limit = UINT64_MAX / n * n;
  std::uint64_t x;
  do { x = eng(); } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& eng) { return (eng() >> 11) * 0x1.0p-53; }

}  // namespace rng

// Uniform m-subset of {0..N-1} (partial Fisher-Yates), sorted.
inline std::vector<int> sample_m(int N, int m, std::mt19937_64& eng) {
  if (m < 0 || m > N) throw config_error("sample_m: m out of range");
  std::vector<int> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < m; ++i) {
    int j = i + static_cast<int>(rng::uniform_below(eng, static_cast<std::uint64_t>(N - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Independent-inclusion subset: each vertex kept with probability p.
inline std::vector<int> sample_p(int N, double p, std::mt19937_64& eng) {
  if (p < 0.0 || p > 1.0) throw config_error("sample_p: p out of range");
  std::vector<int> out;
  for (int v = 0; v < N; ++v)
    if (rng::uniform01(eng) < p) out.push_back(v);
  return out;
}

// ----- exhaustive m-subset law of the induced count -----

struct ExactDistribution {
  int N = 0, m = 0;
  Int total = 0;                      // C(N, m)
  std::map<long long, Int> mass_num;  // count value -> number of subsets

  Rat mass(long long value) const {
    auto it = mass_num.find(value);
    return it == mass_num.end() ? Rat(0) : Rat(it->second, total);
  }
  // P(count > c)
  Rat tail_above(const Rat& c) const {
    Int num = 0;
    for (const auto& [v, n] : mass_num)
      if (Rat(v) > c) num += n;
    return Rat(num, total);
  }
  Rat mean() const {
    Int s = 0;
    for (const auto& [v, n] : mass_num) s += Int(v) * n;
    return Rat(s, total);
  }
};

inline ExactDistribution exact_distribution(const Hypergraph& H, int m,
                                            long long budget = kDefaultBudget) {
  if (m < 0 || m > H.N) throw config_error("m out of range");
  if (binom(H.N, m) > budget) throw budget_error("exact_distribution: C(N,m) exceeds budget");
  ExactDistribution dist;
  dist.N = H.N;
  dist.m = m;
  dist.total = binom(H.N, m);
  std::vector<int> B;
  for_each_subset(H.N, m, [&](const std::vector<int>& idx) {
    ++dist.mass_num[count_induced(H, idx)];
  });
  return dist;
}

// ----- Monte Carlo tail estimation -----

struct SampleStats {
  std::string model;  // "m" or "p"
  double param = 0.0;
  std::vector<double> thresholds;               // ascending
  std::vector<long long> exceed_abs, exceed_plus, exceed_minus;
  long long n_samples = 0;
  std::uint64_t seed = 0;
  std::string ci_method = "clopper-pearson";

  bool operator==(const SampleStats&) const = default;
};

struct Interval {
  double lo = 0.0, hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
inline Interval clopper_pearson(long long successes, long long n, double confidence = 0.95) {
  using boost::math::binomial_distribution;
  double alpha = 1.0 - confidence;
  Interval iv;
  iv.lo = binomial_distribution<double>::find_lower_bound_on_p(
      static_cast<double>(n), static_cast<double>(successes), alpha / 2);
  iv.hi = binomial_distribution<double>::find_upper_bound_on_p(
      static_cast<double>(n), static_cast<double>(successes), alpha / 2);
  return iv;
}

// Deviation tail estimator. counter(B) must return the induced edge count of
// the sampled subset; mean is the exact reference the deviation is measured
// against (L_k(m) in the m-model, p^k h in the p-model). Threshold crossings
// are precomputed as exact integer count cutoffs, so no float comparison can
// misclassify a sample. Sampling is blocked: block b draws its own substream,
// so results do not depend on the number of worker threads.
struct TailEstimateConfig {
  long long n_samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  int block_size = 1024;
};

inline SampleStats tail_estimate(int N, const std::string& model, double param,
                                 const std::function<long long(const std::vector<int>&)>& counter,
                                 const Rat& mean, std::vector<double> thresholds,
                                 const TailEstimateConfig& cfg) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end()))
    throw config_error("thresholds must be ascending");
  SampleStats st;
  st.model = model;
  st.param = param;
  st.thresholds = thresholds;
  st.n_samples = cfg.n_samples;
  st.seed = cfg.seed;
  size_t T = thresholds.size();
  st.exceed_abs.assign(T, 0);
  st.exceed_plus.assign(T, 0);
  st.exceed_minus.assign(T, 0);

  // count > mean + a  <=>  count >= cut_plus[a];
  // count < mean - a  <=>  count <= cut_minus[a]
  std::vector<long long> cut_plus(T), cut_minus(T);
  for (size_t a = 0; a < T; ++a) {
    Rat ra(thresholds[a]);  // exact double -> rational
    cut_plus[a] = (floor_rat(mean + ra) + 1).convert_to<long long>();
    cut_minus[a] = (-floor_rat(-(mean - ra)) - 1).convert_to<long long>();
  }

  long long n_blocks = (cfg.n_samples + cfg.block_size - 1) / cfg.block_size;
  std::atomic<long long> next_block{0};
  std::vector<std::vector<long long>> acc_plus, acc_minus;
  int workers = std::max(1, cfg.threads);
  acc_plus.assign(workers, std::vector<long long>(T, 0));
  acc_minus.assign(workers, std::vector<long long>(T, 0));

  auto work = [&](int w) {
    while (true) {
      long long b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      auto eng = rng::make_stream(cfg.seed, static_cast<std::uint64_t>(b));
      long long lo = b * cfg.block_size;
      long long hi = std::min<long long>(lo + cfg.block_size, cfg.n_samples);
      for (long long s = lo; s < hi; ++s) {
        std::vector<int> B = model == "m"
                                 ? sample_m(N, static_cast<int>(param), eng)
                                 : sample_p(N, param, eng);
        long long c = counter(B);
        for (size_t a = 0; a < T; ++a) {
          if (c >= cut_plus[a]) ++acc_plus[w][a];
          if (c <= cut_minus[a]) ++acc_minus[w][a];
        }
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (int w = 0; w < workers; ++w)
    for (size_t a = 0; a < T; ++a) {
      st.exceed_plus[a] += acc_plus[w][a];
      st.exceed_minus[a] += acc_minus[w][a];
    }
  // For a >= 0 the one-sided events are mutually exclusive, so |D| > a is
  // their disjoint union; a negative threshold is beaten by every sample.
  for (size_t a = 0; a < T; ++a)
    st.exceed_abs[a] =
        thresholds[a] < 0 ? cfg.n_samples : st.exceed_plus[a] + st.exceed_minus[a];
  return st;
}

}  // namespace hyperdev
