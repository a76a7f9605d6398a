#include <gtest/gtest.h>

#include <sstream>

#include "hyperdev/combinatorics.hpp"
#include "hyperdev/hypergraph.hpp"
#include "hyperdev/families.hpp"
#include "hyperdev/regularity.hpp"
#include "test_util.hpp"

using namespace hyperdev;

TEST(Combinatorics, BinomAndFalling) {
  EXPECT_EQ(binom(10, 3), 120);
  EXPECT_EQ(binom(10, 0), 1);
  EXPECT_EQ(binom(3, 5), 0);
  EXPECT_EQ(binom(-1, 0), 0);
  EXPECT_EQ(falling(10, 3), 720);
  EXPECT_EQ(falling(10, 0), 1);
  EXPECT_EQ(falling(3, 5), 0);
  // pascal table agrees with the exact version
  auto pt = pascal_table(12);
  for (int n = 0; n <= 12; ++n)
    for (int r = 0; r <= n; ++r) EXPECT_EQ(Int(pt[n][r]), binom(n, r));
}

TEST(Combinatorics, SubsetVisitor) {
  int count = 0;
  for_each_subset(6, 3, [&](const std::vector<int>& s) {
    EXPECT_EQ(s.size(), 3u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    ++count;
  });
  EXPECT_EQ(count, 20);
  count = 0;
  for_each_subset(4, 0, [&](const std::vector<int>& s) {
    EXPECT_TRUE(s.empty());
    ++count;
  });
  EXPECT_EQ(count, 1);
}

TEST(Hypergraph, PartialCountBasics) {
  auto H = testutil::random_hypergraph(10, 3, 25, 42);
  std::vector<int> empty;
  EXPECT_EQ(count_partial(H, empty, 0), H.h());  // N_0 counts every edge
  EXPECT_EQ(count_partial(H, empty, 1), 0);
  std::vector<int> B = {1, 3, 4, 7, 9};
  EXPECT_EQ(count_partial(H, B, H.k), count_induced(H, B));
  EXPECT_EQ(count_partial(H, B, 0), H.h());
  // adding a vertex can only grow each N_j
  std::vector<int> B2 = B;
  B2.push_back(0);
  for (int j = 0; j <= H.k; ++j)
    EXPECT_GE(count_partial(H, B2, j), count_partial(H, B, j));
}

// exhaustive mean: the average of N_j over all m-subsets is h C(k,j) (m)_j / (N)_j
TEST(Hypergraph, ExpectedPartialExhaustive) {
  auto H = testutil::random_hypergraph(8, 3, 17, 7);
  for (int m = 0; m <= 8; ++m) {
    std::vector<Int> sums(H.k + 1, 0);
    for_each_subset(8, m, [&](const std::vector<int>& B) {
      for (int j = 0; j <= H.k; ++j) sums[j] += count_partial(H, B, j);
    });
    for (int j = 0; j <= H.k; ++j) {
      Rat avg(sums[j], binom(8, m));
      EXPECT_EQ(avg, expected_partial(8, 3, H.h(), j, m)) << "m=" << m << " j=" << j;
    }
  }
}

TEST(Hypergraph, DegreeMatchesLink) {
  auto H = testutil::random_hypergraph(11, 4, 40, 3);
  for (int x = 0; x < H.N; ++x) {
    auto L = link(H, x);
    EXPECT_EQ(L.N, H.N - 1);
    EXPECT_EQ(L.k, H.k - 1);
    std::vector<int> single = {x};
    EXPECT_EQ(static_cast<long long>(L.h()), degree(H, single));
  }
}

TEST(Hypergraph, EdgeListRoundTrip) {
  auto H = testutil::random_hypergraph(9, 3, 20, 11);
  std::stringstream ss;
  write_edge_list(ss, H);
  auto H2 = read_edge_list(ss);
  EXPECT_EQ(H2.N, H.N);
  EXPECT_EQ(H2.k, H.k);
  EXPECT_EQ(H2.edges, H.edges);
}

TEST(Hypergraph, EdgeListRejectsGarbage) {
  {
    std::stringstream ss("3 9");  // truncated header
    EXPECT_THROW(read_edge_list(ss), config_error);
  }
  {
    std::stringstream ss("3 9 1\n0 1");  // truncated edge
    EXPECT_THROW(read_edge_list(ss), config_error);
  }
  {
    std::stringstream ss("3 9 1\n0 1 9\n");  // vertex out of range
    EXPECT_THROW(read_edge_list(ss), config_error);
  }
  {
    std::stringstream ss("3 9 1\n0 1 1\n");  // repeated vertex
    EXPECT_THROW(read_edge_list(ss), config_error);
  }
}

TEST(Regularity, ExactReportOnRegularInstance) {
  // 3-progression family: each vertex lies in 3(N-1)/2 edges, each pair in
  // C(3,2) = 3; both levels are exactly regular.
  auto H = build_kap(13, 3);
  auto r1 = regularity_report(H, 1, kDefaultBudget, 1);
  EXPECT_TRUE(r1.exact);
  EXPECT_EQ(r1.max_degree, 18);
  EXPECT_EQ(r1.min_degree, 18);
  EXPECT_EQ(r1.eta, Rat(0));
  auto r2 = regularity_report(H, 2, kDefaultBudget, 1);
  EXPECT_TRUE(r2.exact);
  EXPECT_EQ(r2.max_degree, 3);
  EXPECT_EQ(r2.min_degree, 3);
  EXPECT_EQ(r2.eta, Rat(0));
}

TEST(Regularity, EtaMonotoneInR) {
  // eta_{r-1} <= eta_r on arbitrary instances
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    auto H = testutil::random_hypergraph(10, 4, 30, seed);
    Rat prev = 0;
    for (int r = 1; r < H.k; ++r) {
      auto rep = regularity_report(H, r, kDefaultBudget, 1);
      ASSERT_TRUE(rep.exact);
      EXPECT_LE(prev, rep.eta) << "seed " << seed << " r " << r;
      prev = rep.eta;
    }
  }
}

TEST(Regularity, LinkInheritsRegularity) {
  // Delta_r(H(x)) <= Delta_{r+1}(H) unconditionally; when eta_r <= 1/3 the
  // link's eta_{r-1} stays within 3 eta_r. A 3-progression family with one
  // edge removed keeps eta_2 just under 1/3.
  auto H = build_kap(13, 3);
  H.edges.erase(H.edges.begin() + 10);
  auto r2 = regularity_report(H, 2, kDefaultBudget, 1);
  ASSERT_TRUE(r2.exact);
  ASSERT_LE(r2.eta, Rat(1, 3));
  for (int x = 0; x < H.N; ++x) {
    auto L = link(H, x);
    auto l1 = regularity_report(L, 1, kDefaultBudget, 1);
    auto h2 = regularity_report(H, 2, kDefaultBudget, 1);
    EXPECT_LE(l1.max_degree, h2.max_degree);
    EXPECT_LE(l1.eta, Rat(3) * r2.eta) << "x=" << x;
  }
}

TEST(Regularity, SampledFallbackIsFlagged) {
  auto H = build_kap(13, 3);
  // force the sampling path with a tiny budget
  auto rep = regularity_report(H, 2, 10, 99);
  EXPECT_FALSE(rep.exact);
  EXPECT_GT(rep.sampled_sets, 0);
  EXPECT_EQ(rep.sample_seed, 99u);
  // degrees it does see are the true constant value
  EXPECT_EQ(rep.max_degree, 3);
}

TEST(Hypergraph, ValidationRejectsBadEdges) {
  Hypergraph H;
  H.N = 5;
  H.k = 3;
  H.edges = {{0, 1, 2}};
  EXPECT_NO_THROW(make_hypergraph(5, 3, {{2, 1, 0}}));
  EXPECT_THROW(make_hypergraph(5, 3, {{0, 1}}), config_error);
  EXPECT_THROW(make_hypergraph(5, 3, {{0, 1, 5}}), config_error);
  EXPECT_THROW(make_hypergraph(5, 3, {{0, 1, 1}}), config_error);
}
