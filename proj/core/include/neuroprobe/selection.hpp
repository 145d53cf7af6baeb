#pragma once

#include <cstddef>
#include <vector>

#include "neuroprobe/data.hpp"
#include "neuroprobe/probe.hpp"
#include "neuroprobe/subset.hpp"

namespace neuroprobe {

inline constexpr std::size_t kDefaultTopK = 50;

/// Sum over the evaluation set of log p(pi_n | h_n, C).
double eval_loglik(const ProbeParameters& theta, const ProbeDataset& eval_set,
                   const NeuronSubset& subset);

/// Score of every candidate dimension at every greedy step; already selected
/// dimensions hold -infinity.
using CandidateDump = std::vector<std::vector<double>>;

/// Greedy forward selection of k dimensions maximizing eval_loglik.
/// Ties go to the lowest index.
NeuronSubset greedy_select(const ProbeParameters& theta, const ProbeDataset& eval_set,
                           std::size_t k, CandidateDump* dump = nullptr);

}  // namespace neuroprobe
