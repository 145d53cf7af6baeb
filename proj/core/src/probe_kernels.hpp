#pragma once

// Shared inner loops of the probe objective; not installed.

#include <span>
#include <vector>

#include "neuroprobe/probe.hpp"

namespace neuroprobe::detail {

struct BatchRef {
  const ProbeDataset& ds;
  std::span<const int> labels;
  std::span<const std::size_t> rows;
};

/// For every record and sample, evaluates log_joint and adds its gradient
/// contributions. Either output may be null. `grad_logits` receives only the
/// score-function term (entropy gradient is added by the caller). Returns
/// sum over records of the per-record mean log_joint.
double accumulate(const ProbeParameters& theta, const SamplerParameters* phi, const BatchRef& batch,
                  const SubsetSamples& subsets, double baseline, ProbeGradient* grad_theta,
                  std::vector<double>* grad_logits);

}  // namespace neuroprobe::detail
