#include "neuroprobe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "neuroprobe/error.hpp"
#include "neuroprobe/random.hpp"

namespace neuroprobe {

namespace {

double log_choose(std::size_t n, std::size_t r) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

void check_overlap_args(std::size_t d, std::size_t k, std::size_t m) {
  if (!(m <= k && k <= d)) {
    throw Error("overlap arguments must satisfy 0 <= m <= k <= d (got d=" + std::to_string(d) +
                ", k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
}

// First k entries of `pool` become a uniform k-subset.
void partial_shuffle(std::vector<std::size_t>& pool, std::size_t k, Rng& rng) {
  const std::size_t d = pool.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, d - i));
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace

PValueMethod parse_pvalue_method(const std::string& text) {
  if (text == "permutation") return PValueMethod::permutation;
  if (text == "exact") return PValueMethod::exact;
  throw Error("unknown p-value method '" + text + "' (expected exact|permutation)");
}

std::string to_string(PValueMethod method) {
  return method == PValueMethod::permutation ? "permutation" : "exact";
}

std::size_t overlap_count(const NeuronSubset& a, const NeuronSubset& b) {
  if (a.d != b.d) {
    throw Error("cannot compare subsets of different dimensionality (" + std::to_string(a.d) +
                " vs " + std::to_string(b.d) + ")");
  }
  const Inclusion in_a = to_inclusion(a);
  b.validate();
  std::size_t m = 0;
  for (std::size_t i : b.dims) m += in_a[i];
  return m;
}

double hypergeom_tail(std::size_t d, std::size_t k, std::size_t m) {
  check_overlap_args(d, k, m);
  const std::size_t lowest = 2 * k > d ? 2 * k - d : 0;
  if (m <= lowest) return 1.0;
  const double log_total = log_choose(d, k);
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (std::size_t j = m; j <= k; ++j) {
    terms.push_back(log_choose(k, j) + log_choose(d - k, k - j) - log_total);
    top = std::max(top, terms.back());
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return std::min(1.0, std::exp(top + std::log(sum)));
}

double permutation_pvalue(std::size_t d, std::size_t k, std::size_t m, std::uint64_t trials,
                          std::uint64_t seed) {
  check_overlap_args(d, k, m);
  if (trials == 0) throw Error("permutation test needs at least one trial");
  Rng rng(seed);
  std::vector<std::size_t> pool(d);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::uint8_t> in_first(d, 0);
  std::vector<std::size_t> first(k);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    partial_shuffle(pool, k, rng);
    std::copy_n(pool.begin(), k, first.begin());
    for (std::size_t i : first) in_first[i] = 1;
    partial_shuffle(pool, k, rng);
    std::size_t overlap = 0;
    for (std::size_t i = 0; i < k; ++i) overlap += in_first[pool[i]];
    for (std::size_t i : first) in_first[i] = 0;
    if (overlap >= m) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(trials + 1);
}

PValueFamily holm_bonferroni(PValueFamily family) {
  const std::size_t t = family.tests.size();
  if (t == 0) throw Error("Holm-Bonferroni needs at least one test");
  if (!(family.alpha > 0.0 && family.alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
  for (const auto& test : family.tests) {
    if (!(test.p_value >= 0.0 && test.p_value <= 1.0)) {
      throw Error("p-value of '" + test.id + "' outside [0, 1]");
    }
  }
  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return family.tests[a].p_value < family.tests[b].p_value;
  });

  family.rejections.assign(t, false);
  family.rank.assign(t, 0);
  family.threshold.assign(t, 0.0);
  bool stopped = false;
  for (std::size_t i = 0; i < t; ++i) {
    const std::size_t idx = order[i];
    const double threshold = family.alpha / static_cast<double>(t - i);
    family.rank[idx] = i + 1;
    family.threshold[idx] = threshold;
    if (!stopped && family.tests[idx].p_value <= threshold) {
      family.rejections[idx] = true;
    } else {
      stopped = true;
    }
  }
  return family;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share the mean of ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t r = i; r < j; ++r) ranks[order[r]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman: inputs differ in length");
  if (x.size() < 3) throw Error("spearman: need at least 3 points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error("spearman: non-finite input");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const auto n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double a = rx[i] - mean;
    const double b = ry[i] - mean;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("spearman: undefined for a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace neuroprobe
