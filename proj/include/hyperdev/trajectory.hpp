#pragma once

#include <algorithm>
#include <vector>

#include "hyperdev/hypergraph.hpp"

namespace hyperdev {

// Vertex-insertion trajectory: perm[0..N-1] is the insertion order, and
// partial[i][l] = N_l(B_i) where B_i is the set of the first i vertices.
// Row i=0 is the empty set (N_0 = h, all others 0). Counting is incremental:
// adding vertex b raises N_l by C(|f cap B|, l-1) for every edge f through b.
struct Trajectory {
  const Hypergraph* H = nullptr;
  std::vector<int> perm;
  std::vector<std::vector<long long>> partial;  // (N+1) x (k+1)

  long long increment(int i, int l) const {  // A_l(B_i), 1 <= i <= N
    return partial[i][l] - partial[i - 1][l];
  }
};

inline Trajectory run_trajectory(const Hypergraph& H, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != H.N) throw config_error("perm size != N");
  {
    std::vector<char> seen(H.N, 0);
    for (int v : perm) {
      if (v < 0 || v >= H.N || seen[v]) throw config_error("not a permutation");
      seen[v] = 1;
    }
  }
  Trajectory t;
  t.H = &H;
  t.perm = perm;
  t.partial.assign(H.N + 1, std::vector<long long>(H.k + 1, 0));
  t.partial[0][0] = H.h();

  auto inc = H.incidence();
  auto C = pascal_table(H.k);
  std::vector<int> filled(H.edges.size(), 0);  // |f cap B_i| per edge
  for (int i = 1; i <= H.N; ++i) {
    t.partial[i] = t.partial[i - 1];
    int b = perm[i - 1];
    for (int e : inc[b]) {
      int c = filled[e];
      for (int l = 1; l <= H.k; ++l) t.partial[i][l] += C[c][l - 1];
      ++filled[e];
    }
  }
  return t;
}

// E[A_j(B_i) | B_{i-1}] = ((k-j+1) N_{j-1}(B_{i-1}) - j N_j(B_{i-1})) / (N-i+1).
// j = 0 gives 0 (A_0 is identically zero).
inline Rat conditional_increment_mean(const Trajectory& t, int i, int j) {
  const auto& H = *t.H;
  if (i < 1 || i > H.N) throw config_error("i out of range");
  if (j < 0 || j > H.k) throw config_error("j out of range");
  if (j == 0) return 0;
  Int num = Int(H.k - j + 1) * t.partial[i - 1][j - 1] - Int(j) * t.partial[i - 1][j];
  return Rat(num, Int(H.N - i + 1));
}

// X_j(B_i) = A_j(B_i) - E[A_j(B_i) | B_{i-1}], exact.
inline Rat martingale_difference(const Trajectory& t, int i, int j) {
  if (j == 0) return 0;
  return Rat(t.increment(i, j)) - conditional_increment_mean(t, i, j);
}

// Closed-form weight of X_l(B_i) in the decomposition of D_j(B_m):
//   C(k-l, k-j) * (N-m)_l (m-i)_{j-l} / (N-i)_j,
// defined whenever (N-i)_j != 0, i.e. i <= N-j.
inline Rat reconstruction_coefficient(int N, int k, int j, int m, int i, int l) {
  Int den = falling(N - i, j);
  if (den == 0) throw config_error("closed-form coefficient undefined for i > N-j");
  Int num = binom(k - l, k - j) * falling(N - m, l) * falling(m - i, j - l);
  return Rat(num, den);
}

namespace detail {

// Coefficient tables gamma[j][i][l] with D_j(B_m) = sum gamma * X_l(B_i),
// advanced one m-step at a time via the recursion
//   D_j(B_m) = (N-m-j+1)/(N-m+1) D_j(B_{m-1})
//            + (k-j+1)/(N-m+1) D_{j-1}(B_{m-1}) + X_j(B_m).
// The closed form above satisfies the same recursion, so wherever it is
// defined the two agree; past the band i > N-j the recursion is the
// definition. Denominator N-m+1 never vanishes for m <= N.
struct CoefficientState {
  int N, k;
  // gamma[j][i][l]; i indexed 1..N, l indexed 1..k
  std::vector<std::vector<std::vector<Rat>>> gamma;
  int m = 0;

  CoefficientState(int N_, int k_)
      : N(N_), k(k_),
        gamma(k_ + 1, std::vector<std::vector<Rat>>(N_ + 1, std::vector<Rat>(k_ + 1, Rat(0)))) {}

  void step() {
    ++m;
    for (int j = k; j >= 1; --j) {
      Rat a(N - m - j + 1, N - m + 1);
      Rat b(k - j + 1, N - m + 1);
      for (int i = 1; i < m; ++i)
        for (int l = 1; l <= j; ++l)
          gamma[j][i][l] = a * gamma[j][i][l] + b * gamma[j - 1][i][l];
      gamma[j][m][j] = 1;  // the fresh X_j(B_m) term
    }
  }
};

}  // namespace detail

// D_j(B_m) for all 1 <= j <= k and 0 <= m <= N, each evaluated as the
// explicit weighted sum over martingale differences X_l(B_i). Exact.
// Entry [j][m]; row [0][*] is identically zero.
inline std::vector<std::vector<Rat>> martingale_reconstruct_table(const Trajectory& t) {
  const auto& H = *t.H;
  int N = H.N, k = H.k;
  std::vector<std::vector<Rat>> D(k + 1, std::vector<Rat>(N + 1, Rat(0)));
  // cache X_l(B_i)
  std::vector<std::vector<Rat>> X(N + 1, std::vector<Rat>(k + 1, Rat(0)));
  for (int i = 1; i <= N; ++i)
    for (int l = 1; l <= k; ++l) X[i][l] = martingale_difference(t, i, l);

  detail::CoefficientState st(N, k);
  for (int m = 1; m <= N; ++m) {
    st.step();
    for (int j = 1; j <= k; ++j) {
      Rat acc = 0;
      for (int i = 1; i <= m; ++i)
        for (int l = 1; l <= j; ++l)
          if (st.gamma[j][i][l] != 0 && X[i][l] != 0) acc += st.gamma[j][i][l] * X[i][l];
      D[j][m] = acc;
    }
  }
  return D;
}

// Single (j, m) evaluation of the same weighted sum.
inline Rat martingale_reconstruct(const Trajectory& t, int j, int m) {
  const auto& H = *t.H;
  if (j < 1 || j > H.k) throw config_error("j out of range");
  if (m < 0 || m > H.N) throw config_error("m out of range");
  if (m == 0) return 0;
  detail::CoefficientState st(H.N, H.k);
  for (int mm = 1; mm <= m; ++mm) st.step();
  Rat acc = 0;
  for (int i = 1; i <= m; ++i)
    for (int l = 1; l <= j; ++l)
      if (st.gamma[j][i][l] != 0) acc += st.gamma[j][i][l] * martingale_difference(t, i, l);
  return acc;
}

// Fast path: the same deviations via the value-form recursion (no coefficient
// tables). Used by the CLI at larger N; equality with the coefficient form is
// covered by tests.
inline std::vector<std::vector<Rat>> reconstruct_deviations(const Trajectory& t) {
  const auto& H = *t.H;
  int N = H.N, k = H.k;
  std::vector<std::vector<Rat>> D(k + 1, std::vector<Rat>(N + 1, Rat(0)));
  std::vector<Rat> cur(k + 1, Rat(0)), nxt(k + 1, Rat(0));
  for (int m = 1; m <= N; ++m) {
    for (int j = k; j >= 1; --j) {
      Rat carry = Rat(N - m - j + 1) * cur[j] + Rat(k - j + 1) * cur[j - 1];
      nxt[j] = carry / Rat(N - m + 1) + martingale_difference(t, m, j);
    }
    nxt[0] = 0;
    cur = nxt;
    for (int j = 0; j <= k; ++j) D[j][m] = cur[j];
  }
  return D;
}

struct IncrementBoundReport {
  bool all_pass = true;
  long long violations = 0;
  double max_ratio = 0.0;  // max |X_l(B_i)| / bound over steps with bound > 0
  long long nonzero_x_at_zero_bound = 0;
};

// Per-step bound |X_l(B_i)| <= 2 l C(k,l) eta s^{l-1} h / N with s = i/N,
// checked exactly in rationals for 1 <= l <= r.
inline IncrementBoundReport check_increment_bound(const Trajectory& t, int r, const Rat& eta) {
  const auto& H = *t.H;
  IncrementBoundReport rep;
  for (int i = 1; i <= H.N; ++i) {
    for (int l = 1; l <= r; ++l) {
      Rat x = abs_rat(martingale_difference(t, i, l));
      Rat s_pow = 1;
      for (int q = 0; q < l - 1; ++q) s_pow *= Rat(i, H.N);
      Rat bound = Rat(2 * l) * Rat(binom(H.k, l)) * eta * s_pow * Rat(H.h(), H.N);
      if (x > bound) {
        rep.all_pass = false;
        ++rep.violations;
      }
      if (bound > 0) {
        rep.max_ratio = std::max(rep.max_ratio, to_double(x / bound));
      } else if (x > 0) {
        ++rep.nonzero_x_at_zero_bound;
      }
    }
  }
  return rep;
}

}  // namespace hyperdev
