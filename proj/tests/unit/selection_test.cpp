#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "neuroprobe/error.hpp"
#include "neuroprobe/selection.hpp"
#include "oracles.hpp"

namespace np = neuroprobe;

TEST(EvalLoglik, ZeroThetaIsNLogUniform) {
  np::Rng rng(1);
  const auto ds = fixture::random_dataset(5, 4, 30, rng);
  const auto theta = np::ProbeParameters::zeros(ds.inventory, 5);
  EXPECT_NEAR(np::eval_loglik(theta, ds, np::NeuronSubset::full(5)), 30 * std::log(0.25), 1e-10);
}

TEST(EvalLoglik, EmptySubsetIsBiasOnly) {
  np::Rng rng(2);
  const auto ds = fixture::random_dataset(4, 3, 20, rng);
  auto theta = fixture::random_theta(4, 3, 1.0, rng);
  const double lse = std::log(std::exp(theta.bias[0]) + std::exp(theta.bias[1]) + std::exp(theta.bias[2]));
  double expected = 0;
  for (const auto& r : ds.records) expected += theta.bias[static_cast<std::size_t>(ds.class_index(r.label))] - lse;
  EXPECT_NEAR(np::eval_loglik(theta, ds, np::NeuronSubset::empty(4)), expected, 1e-10);
}

TEST(Greedy, FullKIsAPermutation) {
  np::Rng rng(3);
  const auto ds = fixture::random_dataset(7, 3, 40, rng);
  const auto theta = fixture::random_theta(7, 3, 1.0, rng);
  auto dims = np::greedy_select(theta, ds, 7).dims;
  std::sort(dims.begin(), dims.end());
  std::vector<std::size_t> all(7);
  std::iota(all.begin(), all.end(), std::size_t{0});
  EXPECT_EQ(dims, all);
}

TEST(Greedy, SingleInformativeColumnIsPickedFirst) {
  np::Rng rng(4);
  auto ds = fixture::random_dataset(6, 2, 200, rng);
  for (auto& r : ds.records) r.embedding[4] = r.label == "v0" ? 1.0f : -1.0f;
  auto theta = np::ProbeParameters::zeros(ds.inventory, 6);
  theta.weight(0, 4) = 2.0;
  theta.weight(1, 4) = -2.0;
  EXPECT_EQ(np::greedy_select(theta, ds, 1).dims.front(), 4u);
}

TEST(Greedy, MatchesBruteForceReference) {
  np::Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto ds = fixture::random_dataset(9, 3, 50, rng);
    const auto theta = fixture::random_theta(9, 3, 1.0, rng);
    const auto got = np::greedy_select(theta, ds, 5);
    EXPECT_EQ(got.dims, oracle::greedy(theta, ds, 5));
  }
}

TEST(Greedy, TraceIsTheScoreAfterEachStep) {
  np::Rng rng(6);
  const auto ds = fixture::random_dataset(6, 2, 30, rng);
  const auto theta = fixture::random_theta(6, 2, 1.0, rng);
  const auto got = np::greedy_select(theta, ds, 4);
  ASSERT_EQ(got.selection_trace.size(), 4u);
  for (std::size_t s = 0; s < 4; ++s) {
    const std::vector<std::size_t> prefix(got.dims.begin(), got.dims.begin() + static_cast<std::ptrdiff_t>(s + 1));
    EXPECT_NEAR(got.selection_trace[s], np::eval_loglik(theta, ds, np::NeuronSubset::of(prefix, 6)), 1e-9);
  }
}

TEST(Greedy, TiesGoToLowestIndex) {
  np::Rng rng(7);
  const auto ds = fixture::random_dataset(5, 2, 10, rng);
  const auto theta = np::ProbeParameters::zeros(ds.inventory, 5);
  EXPECT_EQ(np::greedy_select(theta, ds, 3).dims, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Greedy, CandidateDumpHoldsEveryScore) {
  np::Rng rng(8);
  const auto ds = fixture::random_dataset(5, 2, 20, rng);
  const auto theta = fixture::random_theta(5, 2, 1.0, rng);
  np::CandidateDump dump;
  const auto got = np::greedy_select(theta, ds, 2, &dump);
  ASSERT_EQ(dump.size(), 2u);
  const auto& first = dump[0];
  const auto best = std::max_element(first.begin(), first.end()) - first.begin();
  EXPECT_EQ(static_cast<std::size_t>(best), got.dims[0]);
  EXPECT_FALSE(std::isfinite(dump[1][got.dims[0]]));
}

TEST(Greedy, Errors) {
  np::Rng rng(9);
  const auto ds = fixture::random_dataset(4, 2, 10, rng);
  const auto theta = np::ProbeParameters::zeros(ds.inventory, 4);
  EXPECT_THROW(np::greedy_select(theta, ds, 0), np::Error);
  EXPECT_THROW(np::greedy_select(theta, ds, 5), np::Error);
  EXPECT_THROW(np::greedy_select(theta, ds.empty_like(), 2), np::Error);
  EXPECT_THROW(np::greedy_select(np::ProbeParameters::zeros(fixture::inventory(3), 4), ds, 2), np::Error);
}

TEST(Greedy, DefaultKIsFifty) { EXPECT_EQ(np::kDefaultTopK, 50u); }
