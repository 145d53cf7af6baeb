#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "neuroprobe/error.hpp"
#include "neuroprobe/probe.hpp"
#include "oracles.hpp"

namespace np = neuroprobe;

namespace {

np::ProbeDataset one_record(std::vector<float> h, const std::string& label, std::size_t classes) {
  np::ProbeDataset ds;
  ds.d = h.size();
  ds.inventory = fixture::inventory(classes);
  ds.records.push_back({std::move(h), "l", label, "s", 0});
  return ds;
}

oracle::Mask to_mask(const np::Inclusion& inc) {
  oracle::Mask m = 0;
  for (std::size_t i = 0; i < inc.size(); ++i) {
    if (inc[i]) m |= oracle::Mask{1} << i;
  }
  return m;
}

}  // namespace

TEST(Mask, ZeroFillsExcludedDims) {
  const std::vector<float> h{1, 2, 3, 4};
  EXPECT_EQ(np::mask(h, np::NeuronSubset::of({1, 3}, 4)), (std::vector<float>{0, 2, 0, 4}));
}

TEST(LogLikelihood, ZeroThetaIsUniform) {
  const auto theta = np::ProbeParameters::zeros(fixture::inventory(3), 5);
  const std::vector<float> h{0.3f, -1, 2, 7, 0};
  EXPECT_NEAR(np::log_likelihood(theta, h, np::NeuronSubset::full(5), "v1"), std::log(1.0 / 3.0), 1e-15);
  EXPECT_NEAR(np::log_likelihood(theta, h, np::NeuronSubset::full(5), "v1"), -1.0986, 5e-5);
}

TEST(LogLikelihood, BinaryIsLogSigmoidOfGap) {
  auto theta = np::ProbeParameters::zeros(fixture::inventory(2), 1);
  const std::vector<float> h{1.0f};
  for (double z : {-3.0, -0.5, 0.0, 0.25, 4.0}) {
    theta.weight(0, 0) = z;
    const double expected = -std::log1p(std::exp(-z));
    EXPECT_NEAR(np::log_likelihood(theta, h, np::NeuronSubset::full(1), "v0"), expected, 1e-14);
  }
  theta.weight(0, 0) = 0;
  EXPECT_DOUBLE_EQ(np::log_likelihood(theta, h, np::NeuronSubset::full(1), "v0"), std::log(0.5));
}

TEST(LogLikelihood, HandComputedTwoDimExample) {
  auto theta = np::ProbeParameters::zeros(fixture::inventory(2), 2);
  theta.weight(0, 0) = 1;
  theta.weight(1, 1) = 1;
  const std::vector<float> h{2, 0};
  const double expected = std::log(std::exp(2.0) / (std::exp(2.0) + 1.0));
  const double got = np::log_likelihood(theta, h, np::NeuronSubset::of({0}, 2), "v0");
  EXPECT_NEAR(got, expected, 1e-14);
  EXPECT_NEAR(got, -0.1269, 5e-5);
}

TEST(LogLikelihood, MatchesOracleOnRandomSubsets) {
  np::Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto theta = fixture::random_theta(7, 4, 1.5, rng);
    const auto ds = fixture::random_dataset(7, 4, 1, rng);
    const auto mask = static_cast<oracle::Mask>(np::uniform_below(rng, 128));
    np::Inclusion inc(7);
    for (int i = 0; i < 7; ++i) inc[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    const int cls = ds.class_index(ds.records[0].label);
    EXPECT_NEAR(np::log_likelihood(theta, ds.records[0].embedding, inc, cls),
                static_cast<double>(oracle::log_likelihood(theta, ds.records[0].embedding, mask, cls)), 1e-12);
  }
}

TEST(LogPrior, IsMinusDLn2) {
  EXPECT_NEAR(np::log_prior(768), -768 * std::log(2.0), 1e-10);
  EXPECT_NEAR(np::log_prior(768), -532.33703467, 5e-8);  // 768 * ln 2 = 532.337034...
}

TEST(LogJoint, OneDimZeroTheta) {
  const auto theta = np::ProbeParameters::zeros(fixture::inventory(2), 1);
  EXPECT_NEAR(np::log_joint(theta, std::vector<float>{5}, np::NeuronSubset::full(1), "v0"), -2 * std::log(2.0),
              1e-15);
}

TEST(Sampling, SaturatedLogitsGiveFullAndEmptySets) {
  np::Rng rng(4);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(np::sample_subset({std::vector<double>(9, inf)}, rng).k(), 9u);
    EXPECT_EQ(np::sample_subset({std::vector<double>(9, -inf)}, rng).k(), 0u);
    EXPECT_EQ(np::sample_subset({std::vector<double>(9, 60.0)}, rng).k(), 9u);
  }
}

TEST(Sampling, HalfProbabilityMeanSize) {
  np::Rng rng(5);
  const auto phi = np::SamplerParameters::uniform(768);
  double total = 0;
  for (int i = 0; i < 10000; ++i) total += static_cast<double>(np::sample_subset(phi, rng).k());
  const double mean = total / 10000;
  EXPECT_GE(mean, 382.7);
  EXPECT_LE(mean, 385.3);
}

TEST(Sampling, InclusionFrequenciesMatchProbabilities) {
  np::Rng rng(6);
  const np::SamplerParameters phi{{-2.0, 0.0, 1.0, 3.0}};
  std::vector<double> hits(4, 0);
  const int n = 50000;
  for (int t = 0; t < n; ++t) {
    const auto inc = np::sample_inclusion(phi, rng);
    for (std::size_t i = 0; i < 4; ++i) hits[i] += inc[i];
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const double p = np::logistic(phi.logits[i]);
    EXPECT_NEAR(hits[i] / n, p, 4 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Entropy, ClosedFormCases) {
  EXPECT_NEAR(np::entropy(np::SamplerParameters::uniform(768)), 768 * std::log(2.0), 1e-9);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(np::entropy({{inf, -inf, inf}}), 0.0);
  EXPECT_NEAR(np::entropy({{60.0, -60.0}}), 0.0, 1e-20);
  const double l09 = std::log(0.9 / 0.1);
  const double expected = std::log(2.0) - 0.9 * std::log(0.9) - 0.1 * std::log(0.1);
  EXPECT_NEAR(np::entropy({{0.0, l09}}), expected, 1e-12);
  EXPECT_NEAR(np::entropy({{0.0, l09}}), 1.0182, 5e-5);
}

TEST(Entropy, MatchesEnumeration) {
  np::Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto logits = fixture::random_logits(8, 2.0, rng);
    EXPECT_NEAR(np::entropy({logits}), static_cast<double>(oracle::entropy(logits)), 1e-11);
  }
}

TEST(Entropy, GradientMatchesFiniteDifferences) {
  np::Rng rng(8);
  const auto logits = fixture::random_logits(6, 2.0, rng);
  const auto g = np::entropy_gradient({logits});
  for (std::size_t i = 0; i < logits.size(); ++i) {
    auto up = logits, down = logits;
    up[i] += 1e-5;
    down[i] -= 1e-5;
    EXPECT_NEAR(g[i], (np::entropy({up}) - np::entropy({down})) / 2e-5, 1e-8);
  }
}

TEST(ElboEstimate, AgreesWithEnumeration) {
  np::Rng rng(9);
  const auto ds = fixture::random_dataset(8, 3, 6, rng);
  const auto theta = fixture::random_theta(8, 3, 1.0, rng);
  const np::SamplerParameters phi{fixture::random_logits(8, 1.0, rng)};
  const double exact = static_cast<double>(oracle::expected_objective(theta, phi.logits, ds));
  const int draws = 100000;
  double s = 0, s2 = 0;
  for (int t = 0; t < draws; ++t) {
    const double v = np::elbo_estimate(theta, phi, ds, 1, rng);
    s += v;
    s2 += v * v;
  }
  const double mean = s / draws;
  const double se = std::sqrt((s2 / draws - mean * mean) / draws);
  EXPECT_LT(std::abs(mean - exact), 3 * se) << "mean " << mean << " exact " << exact << " se " << se;
}

TEST(ElboEstimate, DegenerateFullSetIsExact) {
  np::Rng rng(10);
  const auto ds = fixture::random_dataset(5, 2, 7, rng);
  const auto theta = fixture::random_theta(5, 2, 1.0, rng);
  const np::SamplerParameters phi{std::vector<double>(5, std::numeric_limits<double>::infinity())};
  double expected = 0;
  for (const auto& r : ds.records) expected += np::log_joint(theta, r.embedding, np::NeuronSubset::full(5), r.label);
  EXPECT_DOUBLE_EQ(np::elbo_estimate(theta, phi, ds, 3, rng), expected);
}

TEST(GradTheta, ZeroThetaBalancedSymmetricHasZeroBiasGradient) {
  np::ProbeDataset ds;
  ds.d = 2;
  ds.inventory = fixture::inventory(2);
  ds.records = {{{1, -1}, "a", "v0", "s", 0}, {{1, -1}, "b", "v1", "s", 1},
                {{-1, 1}, "c", "v0", "s", 2}, {{-1, 1}, "d", "v1", "s", 3}};
  const auto theta = np::ProbeParameters::zeros(ds.inventory, 2);
  np::SubsetSamples subsets(4, {np::Inclusion{1, 1}});
  const auto g = np::grad_theta(theta, ds, subsets);
  for (double b : g.bias) EXPECT_EQ(b, 0.0);
}

TEST(GradTheta, MatchesCentralDifferences) {
  np::Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const auto ds = fixture::random_dataset(6, 3, 8, rng);
    auto theta = fixture::random_theta(6, 3, 0.7, rng);
    const np::SamplerParameters phi{fixture::random_logits(6, 1.0, rng)};
    const auto subsets = np::sample_batch_subsets(phi, ds.size(), 3, rng);
    std::vector<std::vector<oracle::Mask>> masks(ds.size());
    for (std::size_t n = 0; n < ds.size(); ++n) {
      for (const auto& inc : subsets[n]) masks[n].push_back(to_mask(inc));
    }
    const auto g = np::grad_theta(theta, ds, subsets);
    const double h = 1e-5;
    auto fd = [&](double& param) {
      const double keep = param;
      param = keep + h;
      const auto up = oracle::fixed_subset_objective(theta, ds, masks);
      param = keep - h;
      const auto down = oracle::fixed_subset_objective(theta, ds, masks);
      param = keep;
      return static_cast<double>((up - down) / (2 * h));
    };
    for (std::size_t j = 0; j < theta.weights.size(); ++j) EXPECT_NEAR(g.weights[j], fd(theta.weights[j]), 1e-6);
    for (std::size_t c = 0; c < theta.bias.size(); ++c) EXPECT_NEAR(g.bias[c], fd(theta.bias[c]), 1e-6);
  }
}

TEST(GradPhi, UnbiasedAgainstEnumeration) {
  np::Rng rng(12);
  const auto ds = fixture::random_dataset(4, 2, 6, rng);
  const auto theta = fixture::random_theta(4, 2, 1.5, rng);
  const np::SamplerParameters phi{fixture::random_logits(4, 1.0, rng)};
  const auto exact = oracle::expected_objective_gradient(theta, phi.logits, ds);
  np::BaselineState baseline;
  const int draws = 20000;
  std::vector<double> s(4, 0), s2(4, 0);
  for (int t = 0; t < draws; ++t) {
    const auto g = np::grad_phi(theta, phi, ds, 2, rng, baseline);
    for (std::size_t i = 0; i < 4; ++i) {
      s[i] += g[i];
      s2[i] += g[i] * g[i];
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const double mean = s[i] / draws;
    const double se = std::sqrt((s2[i] / draws - mean * mean) / draws);
    EXPECT_LT(std::abs(mean - static_cast<double>(exact[i])), 3.5 * se) << "dim " << i;
  }
}

TEST(GradPhi, EntropyTermAloneWhenLikelihoodIsFlat) {
  // Zero theta makes log_joint constant, so the score term vanishes exactly
  // once the baseline has absorbed that constant.
  np::Rng rng(13);
  const auto ds = fixture::random_dataset(3, 2, 5, rng);
  const auto theta = np::ProbeParameters::zeros(ds.inventory, 3);
  const np::SamplerParameters phi{{0.5, -1.0, 2.0}};
  np::BaselineState baseline;
  const auto g = np::grad_phi(theta, phi, ds, 4, rng, baseline);
  const auto h = np::entropy_gradient(phi);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(g[i], 5 * h[i], 1e-12);
}

TEST(ExactMarginal, MatchesBruteForce) {
  np::Rng rng(14);
  for (int rep = 0; rep < 5; ++rep) {
    const auto ds = fixture::random_dataset(9, 3, 6, rng);
    const auto theta = fixture::random_theta(9, 3, 1.0, rng);
    EXPECT_NEAR(np::exact_marginal_ll(theta, ds), static_cast<double>(oracle::exact_marginal(theta, ds)), 1e-9);
  }
}

TEST(ExactMarginal, BoundsTheExpectedObjective) {
  np::Rng rng(15);
  for (int rep = 0; rep < 10; ++rep) {
    const auto ds = fixture::random_dataset(6, 2, 5, rng);
    const auto theta = fixture::random_theta(6, 2, 2.0, rng);
    const auto logits = fixture::random_logits(6, 2.0, rng);
    EXPECT_LE(static_cast<double>(oracle::expected_objective(theta, logits, ds)),
              np::exact_marginal_ll(theta, ds) + 1e-9);
  }
}

TEST(ExactMarginal, RefusesLargeD) {
  np::Rng rng(16);
  const auto ds = fixture::random_dataset(21, 2, 2, rng);
  EXPECT_THROW(np::exact_marginal_ll(np::ProbeParameters::zeros(ds.inventory, 21), ds), np::Error);
}

TEST(Accuracy, PerfectProbeOnSeparableRecord) {
  auto theta = np::ProbeParameters::zeros(fixture::inventory(2), 1);
  theta.weight(0, 0) = 5;
  auto ds = one_record({1.0f}, "v0", 2);
  EXPECT_EQ(np::accuracy(theta, ds, np::NeuronSubset::full(1)), 1.0);
}
