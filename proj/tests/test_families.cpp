#include <gtest/gtest.h>

#include <map>
#include <set>

#include "hyperdev/families.hpp"
#include "hyperdev/regularity.hpp"

using namespace hyperdev;

TEST(Kap, CountAndPairRegularity) {
  for (int N : {7, 11, 13}) {
    for (int k : {3, 4, 5}) {
      auto H = build_kap(N, k);
      EXPECT_EQ(H.h(), static_cast<long long>(N) * (N - 1) / 2) << N << "," << k;
      EXPECT_EQ(H.k, k);
      // every pair lies in exactly C(k,2) progressions
      auto r2 = regularity_report(H, 2);
      ASSERT_TRUE(r2.exact);
      EXPECT_EQ(Int(r2.max_degree), binom(k, 2)) << N << "," << k;
      EXPECT_EQ(r2.min_degree, r2.max_degree);
      EXPECT_EQ(r2.eta, Rat(0));
      // the (x,d) parametrization happens to be injective as sets here
      std::set<std::vector<int>> distinct(H.edges.begin(), H.edges.end());
      EXPECT_EQ(static_cast<long long>(distinct.size()), H.h());
    }
  }
}

TEST(Kap, RejectsBadParameters) {
  EXPECT_THROW(build_kap(12, 3), config_error);  // composite modulus
  EXPECT_THROW(build_kap(7, 2), config_error);
  EXPECT_THROW(build_kap(5, 5), config_error);  // k = N degenerates
}

TEST(Schur, StructureAndDegrees) {
  for (int N : {7, 11, 13}) {
    auto H = build_schur(N);
    EXPECT_EQ(H.N, N - 1);  // vertices are the nonzero residues
    EXPECT_EQ(H.k, 3);
    EXPECT_EQ(H.h(), static_cast<long long>(N - 1) * (N - 3) / 2);
    auto r1 = regularity_report(H, 1);
    EXPECT_EQ(r1.min_degree, 3 * (N - 3) / 2);
    EXPECT_EQ(r1.max_degree, 3 * (N - 3) / 2);
    auto r2 = regularity_report(H, 2);
    EXPECT_EQ(r2.max_degree, 3);
    // each edge carries a defining relation x + y = z on residues 1..N-1
    for (const auto& e : H.edges) {
      int a = e[0] + 1, b = e[1] + 1, c = e[2] + 1;
      bool rel = (a + b) % N == c % N || (a + c) % N == b % N || (b + c) % N == a % N;
      EXPECT_TRUE(rel);
    }
  }
}

TEST(Sidon, StructureAndDegrees) {
  for (int N : {13, 17}) {
    auto H = build_sidon(N);
    EXPECT_EQ(H.k, 4);
    EXPECT_EQ(Int(H.h()), Int(N) * binom((N - 1) / 2, 2));
    // pair degree is constant: (N-3)/2 same-sum partners plus N-3 cross
    // pairings, i.e. 3(N-3)/2. (The build contract quotes 2(N-3); the
    // acceptance suite asserts that value as written and reports the
    // discrepancy. Here we pin the measured structure.)
    auto r2 = regularity_report(H, 2);
    ASSERT_TRUE(r2.exact);
    EXPECT_EQ(r2.min_degree, 3 * (N - 3) / 2) << N;
    EXPECT_EQ(r2.max_degree, 3 * (N - 3) / 2) << N;
    auto r3 = regularity_report(H, 3);
    EXPECT_EQ(r3.max_degree, 3);
    // every edge has a same-sum pairing among its three perfect matchings
    for (const auto& e : H.edges) {
      int cnt = ((e[0] + e[1]) % N == (e[2] + e[3]) % N) +
                ((e[0] + e[2]) % N == (e[1] + e[3]) % N) +
                ((e[0] + e[3]) % N == (e[1] + e[2]) % N);
      EXPECT_GE(cnt, 1);
    }
  }
}

TEST(LinearSystem, MatchesHandBuiltFamilies) {
  {
    // x - 2y + z = 0 over Z_7: the 3-progressions
    LinearSystemSpec s;
    s.A = {{1, -2, 1}};
    s.N = 7;
    auto H = build_linear_system(s);
    auto K = build_kap(7, 3);
    std::multiset<std::vector<int>> a(H.edges.begin(), H.edges.end());
    std::multiset<std::vector<int>> b(K.edges.begin(), K.edges.end());
    EXPECT_EQ(a, b);
  }
  {
    // x + y - z = 0 over nonzero residues: the Schur triples
    LinearSystemSpec s;
    s.A = {{1, 1, -1}};
    s.N = 13;
    s.exclude_zero = true;
    auto H = build_linear_system(s);
    auto S = build_schur(13);
    std::multiset<std::vector<int>> a(H.edges.begin(), H.edges.end());
    std::multiset<std::vector<int>> b(S.edges.begin(), S.edges.end());
    EXPECT_EQ(a, b);
  }
  {
    // x1 + x2 - x3 - x4 = 0: the additive quadruples
    LinearSystemSpec s;
    s.A = {{1, 1, -1, -1}};
    s.N = 13;
    auto H = build_linear_system(s);
    auto Q = build_sidon(13);
    std::multiset<std::vector<int>> a(H.edges.begin(), H.edges.end());
    std::multiset<std::vector<int>> b(Q.edges.begin(), Q.edges.end());
    EXPECT_EQ(a, b);
  }
}

TEST(LinearSystem, AutomorphismCounts) {
  LinearSystemSpec ap3{{{1, -2, 1}}, 7, false};
  EXPECT_EQ(column_automorphism_count(ap3), 2);  // swap the outer columns
  LinearSystemSpec schur{{{1, 1, -1}}, 13, true};
  EXPECT_EQ(column_automorphism_count(schur), 2);  // swap x,y
  LinearSystemSpec quad{{{1, 1, -1, -1}}, 13, false};
  EXPECT_EQ(column_automorphism_count(quad), 8);  // 2 x 2 x side swap
}

TEST(LinearSystem, ValidationNamesTheDefect) {
  {
    // a zero coefficient is a singular 1x1 minor
    LinearSystemSpec s{{{1, 0, -1}}, 7, false};
    try {
      validate_linear_system(s);
      FAIL() << "expected config_error";
    } catch (const config_error& e) {
      EXPECT_NE(std::string(e.what()).find("minor"), std::string::npos);
    }
  }
  {
    LinearSystemSpec s{{{1, -2, 1}}, 8, false};  // composite modulus
    EXPECT_THROW(validate_linear_system(s), config_error);
  }
  {
    LinearSystemSpec s{{{1, -1}}, 7, false};  // k < 3
    EXPECT_THROW(validate_linear_system(s), config_error);
  }
  {
    // two rows on three columns: l > k-2
    LinearSystemSpec s{{{1, 1, -1}, {1, -1, 1}}, 7, false};
    EXPECT_THROW(validate_linear_system(s), config_error);
  }
  // Note: a redundant pair (e_i - e_j in the rowspace) forces a singular
  // minor on the coordinates where e_i - e_j vanishes, so for l <= k-2 the
  // minor check always fires first; the pair check is belt-and-braces.
}

TEST(LinearSystem, TwoRowSystemEnumerates) {
  // x1 - 2x2 + x3 = 0 and x2 - 2x3 + x4 = 0: 4-term progressions over Z_11
  LinearSystemSpec s;
  s.A = {{1, -2, 1, 0}, {0, 1, -2, 1}};
  s.N = 11;
  auto H = build_linear_system(s);
  auto K = build_kap(11, 4);
  std::multiset<std::vector<int>> a(H.edges.begin(), H.edges.end());
  std::multiset<std::vector<int>> b(K.edges.begin(), K.edges.end());
  EXPECT_EQ(a, b);
}

TEST(LinearSystem, BudgetGuard) {
  LinearSystemSpec s{{{1, 1, -1, -1}}, 101, false};
  EXPECT_THROW(build_linear_system(s, 1000), budget_error);
}
