#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace neuroprobe {

/// Ordered set of selected dimensions. The order of `dims` is meaningful for
/// greedily selected subsets (acceptance order) and ascending for sampled ones.
struct NeuronSubset {
  std::vector<std::size_t> dims;
  std::size_t d = 0;
  /// Evaluation log-likelihood after each greedy step; empty if not selected greedily.
  std::vector<double> selection_trace;

  std::size_t k() const { return dims.size(); }

  /// No duplicates and every index < d. Throws neuroprobe::Error.
  void validate() const;

  static NeuronSubset full(std::size_t d);
  static NeuronSubset empty(std::size_t d);
  static NeuronSubset of(std::vector<std::size_t> dims, std::size_t d);
};

/// Dense 0/1 membership of length d.
using Inclusion = std::vector<std::uint8_t>;

Inclusion to_inclusion(const NeuronSubset& subset);
NeuronSubset from_inclusion(const Inclusion& inclusion);

}  // namespace neuroprobe
