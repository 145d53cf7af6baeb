#pragma once

#include <vector>

#include "neuroprobe/data.hpp"
#include "neuroprobe/probe.hpp"

namespace neuroprobe {

struct EpochRecord {
  int epoch = 0;
  double train_elbo = 0.0;  // per token, accumulated over the epoch's mini-batches
  double dev_elbo = 0.0;    // total over the dev split

  bool operator==(const EpochRecord&) const = default;
};

struct TrainResult {
  ProbeParameters probe;
  SamplerParameters sampler;
  std::vector<EpochRecord> trace;
  int best_epoch = 0;
  double best_dev_elbo = 0.0;
};

/// Mini-batch Adam ascent on the variational bound over the train split.
///
/// The dev bound is estimated after every epoch with a fixed random stream,
/// training stops after `patience` epochs without improvement, and the
/// parameters of the best dev epoch are returned. Throws neuroprobe::Error
/// naming the epoch if the objective becomes non-finite.
TrainResult train(const SplitDataset& sd, const TrainConfig& cfg);

}  // namespace neuroprobe
