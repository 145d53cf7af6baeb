#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neuroprobe/subset.hpp"

namespace neuroprobe {

enum class PValueMethod { permutation, exact };

PValueMethod parse_pvalue_method(const std::string& text);
std::string to_string(PValueMethod method);

struct OverlapRecord {
  std::string lang_a;
  std::string lang_b;
  std::string category;
  std::string model_id;
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  double p_value = 1.0;
  bool significant = false;
};

/// A family of tests corrected together. `rank`, `threshold` and
/// `rejections` are filled by holm_bonferroni, in the order of `tests`.
struct PValueFamily {
  struct Test {
    std::string id;
    double p_value = 1.0;
  };

  std::vector<Test> tests;
  double alpha = 0.05;
  std::vector<bool> rejections;
  std::vector<std::size_t> rank;   // 1-based position in ascending p order
  std::vector<double> threshold;   // alpha / (t - rank + 1)
};

std::size_t overlap_count(const NeuronSubset& a, const NeuronSubset& b);

/// P(X >= m) for X ~ Hypergeometric(population d, k successes, k draws).
double hypergeom_tail(std::size_t d, std::size_t k, std::size_t m);

/// Monte-Carlo estimate of the same tail: fraction of `trials` pairs of
/// independent uniform k-subsets of {0..d-1} overlapping in >= m, with
/// add-one smoothing, (hits + 1) / (trials + 1).
double permutation_pvalue(std::size_t d, std::size_t k, std::size_t m, std::uint64_t trials,
                          std::uint64_t seed);

/// Holm's step-down procedure. Ties in p keep their input order.
PValueFamily holm_bonferroni(PValueFamily family);

/// Average (mid) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman's rho with average ranks for ties. Throws neuroprobe::Error on
/// length mismatch, fewer than 3 points, or a constant input.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace neuroprobe
