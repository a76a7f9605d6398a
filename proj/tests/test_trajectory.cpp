#include <gtest/gtest.h>

#include "hyperdev/families.hpp"
#include "hyperdev/regularity.hpp"
#include "hyperdev/trajectory.hpp"
#include "test_util.hpp"

using namespace hyperdev;

// prefix of a permutation as a vertex set
static std::vector<int> prefix(const std::vector<int>& perm, int m) {
  return std::vector<int>(perm.begin(), perm.begin() + m);
}

TEST(Trajectory, PartialCountsMatchDirectRecount) {
  auto H = testutil::random_hypergraph(9, 3, 20, 5);
  auto perm = testutil::random_permutation(9, 5, 1);
  auto t = run_trajectory(H, perm);
  for (int m = 0; m <= 9; ++m)
    for (int l = 0; l <= H.k; ++l)
      EXPECT_EQ(t.partial[m][l], count_partial(H, prefix(perm, m), l)) << m << " " << l;
}

TEST(Trajectory, RejectsBadPermutations) {
  auto H = testutil::random_hypergraph(6, 3, 8, 2);
  std::vector<int> tooShort = {0, 1, 2};
  EXPECT_THROW(run_trajectory(H, tooShort), config_error);
  std::vector<int> repeated = {0, 1, 2, 3, 4, 4};
  EXPECT_THROW(run_trajectory(H, repeated), config_error);
}

// E[A_j(B_i) | B_{i-1}] = ((k-j+1) N_{j-1} - j N_j) / (N-i+1), verified
// against the brute-force average over every choice of next vertex
TEST(Trajectory, ConditionalIncrementMeanExhaustive) {
  auto H = testutil::random_hypergraph(8, 3, 15, 9);
  auto perm = testutil::random_permutation(8, 9, 2);
  auto t = run_trajectory(H, perm);
  for (int i = 1; i <= 8; ++i) {
    auto B = prefix(perm, i - 1);
    std::vector<bool> used(8, false);
    for (int v : B) used[v] = true;
    for (int j = 1; j <= H.k; ++j) {
      Rat total = 0;
      int options = 0;
      for (int v = 0; v < 8; ++v) {
        if (used[v]) continue;
        auto Bv = B;
        Bv.push_back(v);
        total += Rat(count_partial(H, Bv, j) - count_partial(H, B, j));
        ++options;
      }
      EXPECT_EQ(total / options, conditional_increment_mean(t, i, j)) << "i=" << i << " j=" << j;
    }
  }
}

TEST(Trajectory, ReconstructionMatchesDeviationEverywhere) {
  // includes the boundary band i > N - j where the closed-form coefficient
  // degenerates and the one-step recursion takes over
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto H = testutil::random_hypergraph(8, 4, 18, seed);
    auto perm = testutil::random_permutation(8, seed, 7);
    auto t = run_trajectory(H, perm);
    auto table = martingale_reconstruct_table(t);
    for (int j = 1; j <= H.k; ++j)
      for (int m = 0; m <= 8; ++m) {
        Rat direct = Rat(t.partial[m][j]) - expected_partial(8, 4, H.h(), j, m);
        EXPECT_EQ(direct, table[j][m]) << "seed=" << seed << " j=" << j << " m=" << m;
      }
  }
}

TEST(Trajectory, SingleEvaluationAgreesWithTable) {
  auto H = testutil::random_hypergraph(9, 3, 21, 4);
  auto perm = testutil::random_permutation(9, 4, 3);
  auto t = run_trajectory(H, perm);
  auto table = martingale_reconstruct_table(t);
  for (int j = 1; j <= 3; ++j)
    for (int m : {0, 3, 6, 9}) EXPECT_EQ(martingale_reconstruct(t, j, m), table[j][m]);
}

TEST(Trajectory, ValueFormRecursionAgrees) {
  auto H = testutil::random_hypergraph(10, 3, 24, 8);
  auto perm = testutil::random_permutation(10, 8, 1);
  auto t = run_trajectory(H, perm);
  auto dev = reconstruct_deviations(t);
  for (int j = 1; j <= 3; ++j)
    for (int m = 0; m <= 10; ++m) {
      Rat direct = Rat(t.partial[m][j]) - expected_partial(10, 3, H.h(), j, m);
      EXPECT_EQ(dev[j][m], direct);
    }
}

TEST(Trajectory, ClosedFormCoefficientMatchesRecursionOffBand) {
  // the recursion-built table equals the closed form wherever i <= N - j
  const int N = 8, k = 3;
  auto H = testutil::random_hypergraph(N, k, 14, 6);
  auto perm = testutil::random_permutation(N, 6, 2);
  auto t = run_trajectory(H, perm);
  // accumulate D_j(B_m) from the closed form directly and compare
  for (int j = 1; j <= k; ++j) {
    for (int m = 0; m <= N - j; ++m) {
      Rat acc = 0;
      for (int i = 1; i <= m; ++i)
        for (int l = 1; l <= std::min(j, k); ++l) {
          Rat coef = reconstruction_coefficient(N, k, j, m, i, l);
          if (coef != 0) acc += coef * martingale_difference(t, i, l);
        }
      Rat direct = Rat(t.partial[m][j]) - expected_partial(N, k, H.h(), j, m);
      EXPECT_EQ(acc, direct) << "j=" << j << " m=" << m;
    }
  }
  // inside the band the closed form is undefined
  EXPECT_THROW(reconstruction_coefficient(N, k, 3, 7, 6, 2), config_error);
}

TEST(Martingale, TupleRegularInstanceHasVanishingLowDifferences) {
  // the 3-progression family is pair-regular (eta_2 = 0), so X_1 and X_2
  // vanish identically along every trajectory
  auto H = build_kap(13, 3);
  for (std::uint64_t s : {1u, 5u, 9u}) {
    auto perm = testutil::random_permutation(13, s, 0);
    auto t = run_trajectory(H, perm);
    for (int i = 1; i <= 13; ++i) {
      EXPECT_EQ(martingale_difference(t, i, 1), Rat(0));
      EXPECT_EQ(martingale_difference(t, i, 2), Rat(0));
    }
    auto rep = check_increment_bound(t, 2, Rat(0));
    EXPECT_TRUE(rep.all_pass);
    EXPECT_EQ(rep.nonzero_x_at_zero_bound, 0);
  }
}

TEST(Martingale, IncrementBoundOnPerturbedInstance) {
  // knock one edge out: eta_2 becomes positive and the per-step bound
  // |X_l| <= 2 l C(k,l) eta s^{l-1} h / N must absorb every difference
  auto H = build_kap(13, 3);
  H.edges.erase(H.edges.begin() + 30);
  auto r2 = regularity_report(H, 2);
  ASSERT_TRUE(r2.exact);
  ASSERT_GT(r2.eta, Rat(0));
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto perm = testutil::random_permutation(13, 77, s);
    auto t = run_trajectory(H, perm);
    auto rep = check_increment_bound(t, 2, r2.eta);
    EXPECT_TRUE(rep.all_pass) << "seed stream " << s;
    EXPECT_EQ(rep.violations, 0);
    EXPECT_LE(rep.max_ratio, 1.0);
  }
}
