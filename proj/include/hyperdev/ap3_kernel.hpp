#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "hyperdev/combinatorics.hpp"
#include "hyperdev/errors.hpp"

namespace hyperdev {

// Fast count of 3-progressions {z-d, z, z+d} (d in 1..(N-1)/2) inside a
// subset B of Z/NZ. With f the indicator of B and (f*f) the circular
// autocorrelation, T = sum_{z in B} (f*f)(2z) counts ordered pairs (a, b)
// in B^2 with a + b = 2z; removing the |B| diagonal pairs and halving gives
// the progression count.
//
// (f*f)(c) = sum_a f(a) f(c - a) is evaluated word-parallel: store
// g(t) = f(-t mod N) duplicated on [0, 2N) and AND a shifted window of it
// against f, so each evaluation is O(N/64) popcounts instead of O(N).
struct Ap3Kernel {
  int N;
  std::vector<std::uint64_t> fbits;  // indicator of B over [0, N)
  std::vector<std::uint64_t> gbits;  // g duplicated over [0, 2N)

  explicit Ap3Kernel(int N_) : N(N_) {
    if (!is_prime(N)) throw config_error("ap3 kernel: N must be prime");
    fbits.assign((N + 63) / 64, 0);
    gbits.assign((2 * N + 63) / 64, 0);
  }

  void load(const std::vector<int>& B) {
    std::fill(fbits.begin(), fbits.end(), 0);
    std::fill(gbits.begin(), gbits.end(), 0);
    for (int v : B) {
      if (v < 0 || v >= N) throw config_error("vertex out of range");
      fbits[v >> 6] |= 1ULL << (v & 63);
      int t = (N - v) % N;  // g(t) = f(-t)
      gbits[t >> 6] |= 1ULL << (t & 63);
      gbits[(t + N) >> 6] |= 1ULL << ((t + N) & 63);
    }
  }

  // popcount of f AND (g shifted so that window position `off` aligns with 0)
  long long correlate(int off) const {
    long long total = 0;
    int word_off = off >> 6, bit_off = off & 63;
    for (size_t w = 0; w < fbits.size(); ++w) {
      std::uint64_t window = gbits[word_off + w] >> bit_off;
      if (bit_off && word_off + w + 1 < gbits.size())
        window |= gbits[word_off + w + 1] << (64 - bit_off);
      std::uint64_t masked = fbits[w] & window;
      total += std::popcount(masked);
    }
    return total;
  }

  long long count(const std::vector<int>& B) {
    load(B);
    long long T = 0;
    for (int v : B) {
      int c = 2 * v % N;
      T += correlate(N - c);  // (f*f)(c): f(a) against g(a - c), g-window at N - c
    }
    return (T - static_cast<long long>(B.size())) / 2;
  }
};

inline long long ap3_fast_count(const std::vector<int>& B, int N) {
  Ap3Kernel kern(N);
  return kern.count(B);
}

}  // namespace hyperdev
