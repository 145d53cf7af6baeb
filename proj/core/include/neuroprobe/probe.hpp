#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neuroprobe/data.hpp"
#include "neuroprobe/random.hpp"
#include "neuroprobe/subset.hpp"

namespace neuroprobe {

/// Linear-softmax probe: logits = W * mask(h, C) + b.
struct ProbeParameters {
  std::vector<std::string> inventory_order;
  std::size_t d = 0;
  std::vector<double> weights;  // row-major, num_classes() x d
  std::vector<double> bias;

  std::size_t num_classes() const { return inventory_order.size(); }
  double weight(std::size_t c, std::size_t i) const { return weights[c * d + i]; }
  double& weight(std::size_t c, std::size_t i) { return weights[c * d + i]; }
  int class_index(const std::string& value) const;

  void validate() const;

  static ProbeParameters zeros(std::vector<std::string> inventory, std::size_t d);
  /// Zero bias, weights ~ U(-1/sqrt(d), 1/sqrt(d)).
  static ProbeParameters random_init(std::vector<std::string> inventory, std::size_t d, Rng& rng);

  bool operator==(const ProbeParameters&) const = default;
};

/// Poisson-sampling variational family: dimension i is kept with
/// probability logistic(logits[i]), independently of the others.
struct SamplerParameters {
  std::vector<double> logits;

  std::size_t d() const { return logits.size(); }
  double probability(std::size_t i) const;
  std::vector<double> probabilities() const;

  static SamplerParameters uniform(std::size_t d) { return {std::vector<double>(d, 0.0)}; }

  bool operator==(const SamplerParameters&) const = default;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  int max_epochs = 50;
  int patience = 5;
  int mc_samples = 5;
  std::uint64_t seed = 0;
  double baseline_decay = 0.9;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

double logistic(double x);

std::vector<float> mask(std::span<const float> h, const NeuronSubset& subset);

/// Fills `out` (size num_classes) with log softmax(W * mask(h) + b).
void masked_log_softmax(const ProbeParameters& theta, std::span<const float> h,
                        const Inclusion& inclusion, std::span<double> out);

double log_likelihood(const ProbeParameters& theta, std::span<const float> h,
                      const NeuronSubset& subset, const std::string& value);
double log_likelihood(const ProbeParameters& theta, std::span<const float> h,
                      const Inclusion& inclusion, int cls);

/// Log of the uniform prior over the 2^d subsets.
double log_prior(std::size_t d);

double log_joint(const ProbeParameters& theta, std::span<const float> h,
                 const NeuronSubset& subset, const std::string& value);
double log_joint(const ProbeParameters& theta, std::span<const float> h,
                 const Inclusion& inclusion, int cls);

Inclusion sample_inclusion(const SamplerParameters& phi, Rng& rng);
NeuronSubset sample_subset(const SamplerParameters& phi, Rng& rng);

/// Entropy of the product-of-Bernoullis distribution, in nats.
double entropy(const SamplerParameters& phi);
/// d entropy / d logits.
std::vector<double> entropy_gradient(const SamplerParameters& phi);

/// Monte-Carlo estimate of sum_n ( E_q[log p(pi_n, C | h_n)] + H(q) ) with S
/// independent subsets per record.
double elbo_estimate(const ProbeParameters& theta, const SamplerParameters& phi,
                     const ProbeDataset& batch, int samples, Rng& rng);

struct ProbeGradient {
  std::vector<double> weights;
  std::vector<double> bias;
};

/// Sampled subsets for a batch: subsets[n][s].
using SubsetSamples = std::vector<std::vector<Inclusion>>;

SubsetSamples sample_batch_subsets(const SamplerParameters& phi, std::size_t records, int samples,
                                   Rng& rng);

/// Exact gradient w.r.t. theta of sum_n (1/S) sum_s log_joint(theta, h_n, C_ns, pi_n).
ProbeGradient grad_theta(const ProbeParameters& theta, const ProbeDataset& batch,
                         const SubsetSamples& subsets);

/// Exponential moving average of log_joint used as a control variate.
struct BaselineState {
  double value = 0.0;
  bool initialized = false;
  double decay = 0.9;

  void update(double batch_mean);
};

/// Score-function estimate of d/d logits of sum_n (E_q[log_joint] + H(q)).
///
/// Uses the baseline as it stands on entry, then folds this batch's mean
/// log_joint into it. An uninitialized baseline is seeded from the batch mean
/// before it is used.
std::vector<double> grad_phi(const ProbeParameters& theta, const SamplerParameters& phi,
                             const ProbeDataset& batch, int samples, Rng& rng,
                             BaselineState& baseline);

/// Same estimator for presampled subsets (subsets[n] must be non-empty).
std::vector<double> grad_phi_from_samples(const ProbeParameters& theta,
                                          const SamplerParameters& phi,
                                          const ProbeDataset& batch,
                                          const SubsetSamples& subsets,
                                          BaselineState& baseline);

inline constexpr std::size_t kMaxEnumerableDims = 20;

/// sum_n log sum_C p(pi_n, C | h_n) by full enumeration. Refuses d > 20.
double exact_marginal_ll(const ProbeParameters& theta, const ProbeDataset& ds);

/// Fraction of records whose argmax class under mask C is the gold label.
double accuracy(const ProbeParameters& theta, const ProbeDataset& ds, const NeuronSubset& subset);

/// Mean over records of (1/S) sum_s log p(pi_n | h_n, C_ns), C_ns ~ q.
double mean_sampled_loglik(const ProbeParameters& theta, const SamplerParameters& phi,
                           const ProbeDataset& ds, int samples, Rng& rng);

}  // namespace neuroprobe
