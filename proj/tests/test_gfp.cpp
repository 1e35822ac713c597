#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"

namespace ssg {
namespace {

TEST(Gfp, InverseTimesElementIsOne) {
  for (int p : {3, 5, 7, 11})
    for (int a = 1; a < p; ++a) EXPECT_EQ(gfp::reduce(static_cast<long long>(a) * gfp::inverse(a, p), p), 1);
  EXPECT_THROW(gfp::inverse(0, 3), PreconditionError);
}

TEST(Gfp, ReduceHandlesNegatives) {
  EXPECT_EQ(gfp::reduce(-1, 3), 2);
  EXPECT_EQ(gfp::reduce(-7, 5), 3);
  EXPECT_EQ(gfp::reduce(10, 5), 0);
}

TEST(Gfp, EchelonRankAndMembership) {
  gfp::EchelonBasis b(3, 3);
  EXPECT_TRUE(b.insert({1, 2, 0}));
  EXPECT_TRUE(b.insert({0, 1, 1}));
  EXPECT_FALSE(b.insert({1, 0, 1}));  // sum of the first two
  EXPECT_EQ(b.rank(), 2);
  EXPECT_TRUE(b.contains({2, 1, 0}));
  EXPECT_FALSE(b.contains({0, 0, 1}));
  EXPECT_TRUE(b.insert({0, 0, 1}));
  EXPECT_EQ(b.rank(), 3);
}

TEST(Gfp, InvertRoundTrip) {
  std::mt19937_64 r(7);
  std::uniform_int_distribution<int> d(0, 4);
  int tried = 0;
  while (tried < 200) {
    gfp::Matrix m(4, gfp::Vector(4));
    for (auto& row : m)
      for (auto& x : row) x = d(r);
    auto inv = gfp::invert(5, m);
    EXPECT_EQ(inv.has_value(), gfp::rank(5, m, 4) == 4);
    if (!inv) continue;
    ++tried;
    for (int i = 0; i < 4; ++i) {
      gfp::Vector e(4, 0);
      e[i] = 1;
      EXPECT_EQ(gfp::multiply(5, gfp::multiply(5, e, m), *inv), e);
    }
  }
}

// Number of subspaces of dimension k in GF(p)^n.
std::uint64_t gaussian_binomial(int n, int k, int p) {
  std::uint64_t num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    std::uint64_t a = 1, b = 1;
    for (int t = 0; t < n - i; ++t) a *= static_cast<std::uint64_t>(p);
    for (int t = 0; t < i + 1; ++t) b *= static_cast<std::uint64_t>(p);
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

TEST(Gfp, SubspaceEnumerationCountsAndDistinctness) {
  for (int p : {3, 5})
    for (int n = 0; n <= 4; ++n)
      for (int k = 0; k <= n; ++k) {
        if (p == 5 && n == 4) continue;
        std::set<gfp::Matrix> seen;
        gfp::for_each_subspace(p, n, k, [&](const gfp::Matrix& m) {
          EXPECT_EQ(gfp::rank(p, m, n), k);
          seen.insert(m);
        });
        EXPECT_EQ(seen.size(), gaussian_binomial(n, k, p)) << "p=" << p << " n=" << n << " k=" << k;
      }
}

TEST(Gfp, InvertibleMatrixCountIsGlOrder) {
  // |GL(2,3)| = 48, |GL(3,3)| = 11232
  EXPECT_EQ(detail::invertible_matrices(3, 2).size(), 48u);
  EXPECT_EQ(detail::invertible_matrices(3, 3).size(), 11232u);
  EXPECT_EQ(detail::invertible_matrices(5, 2).size(), 480u);
}

}  // namespace
}  // namespace ssg
