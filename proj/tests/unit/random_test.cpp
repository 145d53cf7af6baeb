#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "neuroprobe/random.hpp"

namespace np = neuroprobe;

TEST(Random, Uniform01StaysInHalfOpenUnitInterval) {
  np::Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = np::uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Random, UniformBelowCoversRangeEvenly) {
  np::Rng rng(2);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = np::uniform_below(rng, 7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  // Chi-square with 6 dof; 22.5 is the 0.999 quantile.
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 22.5);
}

TEST(Random, UniformBelowOneIsZero) {
  np::Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(np::uniform_below(rng, 1), 0u);
}

TEST(Random, StandardNormalMoments) {
  np::Rng rng(4);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = np::standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(Random, StreamsAreReproducible) {
  np::Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(np::uniform01(a), np::uniform01(b));
    ASSERT_EQ(np::standard_normal(a), np::standard_normal(b));
  }
}

TEST(Random, ShuffleIsAPermutation) {
  np::Rng rng(5);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  np::shuffle(std::span<int>(v), rng);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
  std::sort(v.begin(), v.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(v[static_cast<std::size_t>(i)], i);
}

TEST(Random, ShuffleFirstPositionIsUniform) {
  std::vector<int> first(4, 0);
  np::Rng rng(6);
  for (int t = 0; t < 40000; ++t) {
    std::vector<int> v{0, 1, 2, 3};
    np::shuffle(std::span<int>(v), rng);
    ++first[static_cast<std::size_t>(v[0])];
  }
  for (int c : first) EXPECT_NEAR(c / 40000.0, 0.25, 0.015);
}

TEST(Random, DerivedSeedsDifferByStreamAndIndex) {
  std::set<std::uint64_t> seen;
  for (const char* stream : {"split", "train", "overlap"}) {
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(np::derive_seed(13, stream, i));
  }
  EXPECT_EQ(seen.size(), 150u);
  EXPECT_EQ(np::derive_seed(13, "split"), np::derive_seed(13, "split"));
  EXPECT_NE(np::derive_seed(13, "split"), np::derive_seed(14, "split"));
}
