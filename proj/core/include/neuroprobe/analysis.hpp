#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "neuroprobe/metadata.hpp"
#include "neuroprobe/stats.hpp"
#include "neuroprobe/subset.hpp"

namespace neuroprobe {

/// Pairwise overlap of top-k neuron sets for one (model, category).
/// All matrices are L x L, row-major, symmetric.
struct CategoryOverlapMatrix {
  std::string model_id;
  std::string category;
  std::vector<std::string> languages;
  std::size_t k = 0;
  std::size_t d = 0;
  std::vector<std::size_t> overlap;  // m
  std::vector<double> overlap_pct;   // 100 m / k
  std::vector<double> p_values;      // 0 on the diagonal
  std::vector<std::uint8_t> significant;

  std::size_t size() const { return languages.size(); }
  std::size_t at(std::size_t i, std::size_t j) const { return i * languages.size() + j; }
  std::size_t pair_count() const { return size() * (size() - 1) / 2; }
  /// Unordered pairs (i < j) in row-major upper-triangle order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  std::vector<OverlapRecord> records() const;

  bool operator==(const CategoryOverlapMatrix&) const = default;
};

struct MatrixOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 13;
  double alpha = 0.05;
  PValueMethod method = PValueMethod::permutation;
};

/// Fills overlaps and p-values for every unordered pair of `languages` and
/// applies Holm-Bonferroni to the upper triangle as one family. The
/// permutation stream of pair (i, j) is derived from (seed, i, j).
CategoryOverlapMatrix build_matrix(std::string model_id, std::string category,
                                   const std::vector<std::string>& languages,
                                   const std::map<std::string, NeuronSubset>& subsets,
                                   const MatrixOptions& options);

/// Re-runs the correction with one family spanning every matrix (of one
/// model run) and overwrites the significance masks.
void apply_global_correction(std::vector<CategoryOverlapMatrix>& matrices, double alpha);

struct SignificantProportion {
  std::string model_id;
  std::string category;
  std::size_t significant = 0;
  std::size_t total = 0;
  double proportion = 0.0;
};

SignificantProportion significant_proportion(const CategoryOverlapMatrix& matrix);

struct OverlapDistribution {
  std::string model_id;
  std::string category;
  std::vector<double> values;  // upper-triangle percentages
  double mean = 0.0;
  double median = 0.0;
};

std::vector<OverlapDistribution> overlap_distribution(
    const std::vector<CategoryOverlapMatrix>& matrices);

struct GenusContrast {
  std::string model_id;
  std::string category;
  std::optional<double> within_mean;
  std::optional<double> cross_mean;
  std::size_t within_pairs = 0;
  std::size_t cross_pairs = 0;
  std::size_t excluded_pairs = 0;  // a language lacked a genus
};

std::vector<GenusContrast> genus_contrast(const std::vector<CategoryOverlapMatrix>& matrices,
                                          const MetadataTable& metadata);

/// Mean percentage overlap of each language with all its partners.
std::vector<double> language_mean_overlap(const CategoryOverlapMatrix& matrix);

struct CorrelationResult {
  std::string analysis;  // num_values | typology | data_size
  std::string model_id;
  std::string category;
  std::vector<std::string> labels;  // language, or "a|b" for pairs
  std::vector<double> x;
  std::vector<double> y;
  std::optional<double> rho;
  std::size_t dropped = 0;
  std::string note;  // why rho is absent
};

/// Inventory size per (language, category).
using InventorySizes = std::map<std::pair<std::string, std::string>, std::size_t>;

std::vector<CorrelationResult> correlate_num_values(
    const std::vector<CategoryOverlapMatrix>& matrices, const InventorySizes& inventories);
std::vector<CorrelationResult> correlate_typology(
    const std::vector<CategoryOverlapMatrix>& matrices, const MetadataTable& metadata);
std::vector<CorrelationResult> correlate_data_size(
    const std::vector<CategoryOverlapMatrix>& matrices, const MetadataTable& metadata);

}  // namespace neuroprobe
