#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hyperdev/rational.hpp"

namespace hyperdev {

// C(n, r) as an exact integer; 0 outside the triangle.
inline Int binom(long long n, long long r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  Int out = 1;
  for (long long i = 1; i <= r; ++i) {
    out *= (n - r + i);
    out /= i;
  }
  return out;
}

// Falling factorial (n)_j = n(n-1)...(n-j+1), exact.
inline Int falling(long long n, long long j) {
  Int out = 1;
  for (long long i = 0; i < j; ++i) out *= (n - i);
  return out;
}

inline double log_binom(double n, double r) {
  if (r < 0 || r > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(r + 1) - std::lgamma(n - r + 1);
}

// Small Pascal triangle for hot loops (row/col <= limit).
inline std::vector<std::vector<long long>> pascal_table(int limit) {
  std::vector<std::vector<long long>> c(limit + 1, std::vector<long long>(limit + 1, 0));
  for (int n = 0; n <= limit; ++n) {
    c[n][0] = 1;
    for (int r = 1; r <= n; ++r)
      c[n][r] = c[n - 1][r - 1] + (r <= n - 1 ? c[n - 1][r] : 0);
  }
  return c;
}

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Visit all r-subsets of {0..n-1} in lexicographic order. Visitor gets the
// current index vector; return value of the visitor is ignored.
template <typename F>
void for_each_subset(int n, int r, F&& visit) {
  if (r < 0 || r > n) return;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    visit(static_cast<const std::vector<int>&>(idx));
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace hyperdev
