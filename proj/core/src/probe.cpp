#include "neuroprobe/probe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "neuroprobe/error.hpp"
#include "probe_kernels.hpp"

namespace neuroprobe {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void check_dims(const ProbeParameters& theta, std::span<const float> h) {
  if (h.size() != theta.d) {
    throw Error("embedding length " + std::to_string(h.size()) + " does not match probe d = " +
                std::to_string(theta.d));
  }
}

void log_softmax_inplace(std::span<double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - top);
  const double lse = top + std::log(sum);
  for (double& v : z) v -= lse;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

int ProbeParameters::class_index(const std::string& value) const {
  auto it = std::find(inventory_order.begin(), inventory_order.end(), value);
  if (it == inventory_order.end()) throw Error("unknown value label '" + value + "'");
  return static_cast<int>(it - inventory_order.begin());
}

void ProbeParameters::validate() const {
  if (inventory_order.size() < 2) throw Error("probe needs at least 2 classes");
  if (d == 0) throw Error("probe dimensionality must be positive");
  if (weights.size() != num_classes() * d) throw Error("probe weight matrix has wrong shape");
  if (bias.size() != num_classes()) throw Error("probe bias has wrong length");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(weights.begin(), weights.end(), finite) ||
      !std::all_of(bias.begin(), bias.end(), finite)) {
    throw Error("probe parameters must be finite");
  }
}

ProbeParameters ProbeParameters::zeros(std::vector<std::string> inventory, std::size_t d) {
  ProbeParameters p;
  p.inventory_order = std::move(inventory);
  p.d = d;
  p.weights.assign(p.num_classes() * d, 0.0);
  p.bias.assign(p.num_classes(), 0.0);
  return p;
}

ProbeParameters ProbeParameters::random_init(std::vector<std::string> inventory, std::size_t d,
                                             Rng& rng) {
  ProbeParameters p = zeros(std::move(inventory), d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& w : p.weights) w = (2.0 * uniform01(rng) - 1.0) * scale;
  return p;
}

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double SamplerParameters::probability(std::size_t i) const { return logistic(logits[i]); }

std::vector<double> SamplerParameters::probabilities() const {
  std::vector<double> p(logits.size());
  std::transform(logits.begin(), logits.end(), p.begin(), logistic);
  return p;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (batch_size == 0) throw Error("batch size must be positive");
  if (max_epochs < 1) throw Error("max_epochs must be positive");
  if (patience < 1) throw Error("patience must be positive");
  if (mc_samples < 1) throw Error("mc_samples must be positive");
  if (!(baseline_decay >= 0.0 && baseline_decay < 1.0)) throw Error("baseline_decay must lie in [0, 1)");
}

std::vector<float> mask(std::span<const float> h, const NeuronSubset& subset) {
  if (subset.d != h.size()) throw Error("subset dimensionality does not match the vector");
  subset.validate();
  std::vector<float> out(h.size(), 0.0f);
  for (std::size_t i : subset.dims) out[i] = h[i];
  return out;
}

void masked_log_softmax(const ProbeParameters& theta, std::span<const float> h,
                        const Inclusion& inclusion, std::span<double> out) {
  const std::size_t d = theta.d;
  for (std::size_t c = 0; c < theta.num_classes(); ++c) {
    const double* w = theta.weights.data() + c * d;
    double z = theta.bias[c];
    for (std::size_t i = 0; i < d; ++i) {
      if (inclusion[i]) z += w[i] * static_cast<double>(h[i]);
    }
    out[c] = z;
  }
  log_softmax_inplace(out.first(theta.num_classes()));
}

double log_likelihood(const ProbeParameters& theta, std::span<const float> h,
                      const Inclusion& inclusion, int cls) {
  std::vector<double> lp(theta.num_classes());
  masked_log_softmax(theta, h, inclusion, lp);
  return lp[static_cast<std::size_t>(cls)];
}

double log_likelihood(const ProbeParameters& theta, std::span<const float> h,
                      const NeuronSubset& subset, const std::string& value) {
  check_dims(theta, h);
  if (subset.d != theta.d) throw Error("subset dimensionality does not match the probe");
  const int cls = theta.class_index(value);
  return log_likelihood(theta, h, to_inclusion(subset), cls);
}

double log_prior(std::size_t d) { return -static_cast<double>(d) * kLn2; }

double log_joint(const ProbeParameters& theta, std::span<const float> h,
                 const NeuronSubset& subset, const std::string& value) {
  return log_likelihood(theta, h, subset, value) + log_prior(theta.d);
}

double log_joint(const ProbeParameters& theta, std::span<const float> h,
                 const Inclusion& inclusion, int cls) {
  return log_likelihood(theta, h, inclusion, cls) + log_prior(theta.d);
}

Inclusion sample_inclusion(const SamplerParameters& phi, Rng& rng) {
  Inclusion inc(phi.d());
  for (std::size_t i = 0; i < phi.d(); ++i) inc[i] = uniform01(rng) < phi.probability(i) ? 1 : 0;
  return inc;
}

NeuronSubset sample_subset(const SamplerParameters& phi, Rng& rng) {
  return from_inclusion(sample_inclusion(phi, rng));
}

double entropy(const SamplerParameters& phi) {
  double h = 0.0;
  for (double x : phi.logits) {
    if (!std::isfinite(x)) continue;
    const double p = logistic(x);
    h += p * softplus(-x) + (1.0 - p) * softplus(x);
  }
  return h;
}

std::vector<double> entropy_gradient(const SamplerParameters& phi) {
  std::vector<double> g(phi.d());
  for (std::size_t i = 0; i < phi.d(); ++i) {
    const double x = phi.logits[i];
    if (!std::isfinite(x)) continue;
    const double p = logistic(x);
    g[i] = -x * p * (1.0 - p);
  }
  return g;
}

SubsetSamples sample_batch_subsets(const SamplerParameters& phi, std::size_t records, int samples,
                                   Rng& rng) {
  SubsetSamples out(records);
  for (auto& per_record : out) {
    per_record.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) per_record.push_back(sample_inclusion(phi, rng));
  }
  return out;
}

namespace detail {

double accumulate(const ProbeParameters& theta, const SamplerParameters* phi, const BatchRef& batch,
                  const SubsetSamples& subsets, double baseline, ProbeGradient* grad_theta,
                  std::vector<double>* grad_logits) {
  const std::size_t d = theta.d;
  const std::size_t classes = theta.num_classes();
  const double prior = log_prior(d);
  std::vector<double> probs;
  if (phi) probs = phi->probabilities();
  std::vector<double> lp(classes);
  double total = 0.0;

  for (std::size_t b = 0; b < batch.rows.size(); ++b) {
    const std::size_t row = batch.rows[b];
    const auto& h = batch.ds.records[row].embedding;
    const auto cls = static_cast<std::size_t>(batch.labels[row]);
    const auto& samples = subsets[b];
    const double inv_s = 1.0 / static_cast<double>(samples.size());
    double record_sum = 0.0;
    for (const Inclusion& inc : samples) {
      masked_log_softmax(theta, h, inc, lp);
      const double lj = lp[cls] + prior;
      record_sum += lj;
      if (grad_theta) {
        for (std::size_t c = 0; c < classes; ++c) {
          const double g = ((c == cls ? 1.0 : 0.0) - std::exp(lp[c])) * inv_s;
          grad_theta->bias[c] += g;
          double* gw = grad_theta->weights.data() + c * d;
          for (std::size_t i = 0; i < d; ++i) {
            if (inc[i]) gw[i] += g * static_cast<double>(h[i]);
          }
        }
      }
      if (grad_logits) {
        const double weight = (lj - baseline) * inv_s;
        for (std::size_t i = 0; i < d; ++i) {
          (*grad_logits)[i] += weight * ((inc[i] ? 1.0 : 0.0) - probs[i]);
        }
      }
    }
    total += record_sum * inv_s;
  }
  return total;
}

}  // namespace detail

double elbo_estimate(const ProbeParameters& theta, const SamplerParameters& phi,
                     const ProbeDataset& batch, int samples, Rng& rng) {
  if (samples < 1) throw Error("sample count must be at least 1");
  if (batch.empty()) throw Error("cannot estimate the bound on an empty batch");
  if (phi.d() != theta.d || batch.d != theta.d) throw Error("dimensionality mismatch");
  const auto labels = batch.label_indices();
  const auto rows = all_rows(batch.size());
  const auto subsets = sample_batch_subsets(phi, batch.size(), samples, rng);
  const double expected = detail::accumulate(theta, nullptr, {batch, labels, rows}, subsets, 0.0,
                                             nullptr, nullptr);
  return expected + static_cast<double>(batch.size()) * entropy(phi);
}

ProbeGradient grad_theta(const ProbeParameters& theta, const ProbeDataset& batch,
                         const SubsetSamples& subsets) {
  if (subsets.size() != batch.size()) throw Error("one subset list per record is required");
  ProbeGradient g{std::vector<double>(theta.weights.size(), 0.0),
                  std::vector<double>(theta.bias.size(), 0.0)};
  const auto labels = batch.label_indices();
  const auto rows = all_rows(batch.size());
  detail::accumulate(theta, nullptr, {batch, labels, rows}, subsets, 0.0, &g, nullptr);
  return g;
}

void BaselineState::update(double batch_mean) {
  if (!initialized) {
    value = batch_mean;
    initialized = true;
    return;
  }
  value = decay * value + (1.0 - decay) * batch_mean;
}

std::vector<double> grad_phi_from_samples(const ProbeParameters& theta,
                                          const SamplerParameters& phi,
                                          const ProbeDataset& batch,
                                          const SubsetSamples& subsets,
                                          BaselineState& baseline) {
  if (subsets.size() != batch.size()) throw Error("one subset list per record is required");
  if (batch.empty()) throw Error("cannot estimate a gradient on an empty batch");
  const auto labels = batch.label_indices();
  const auto rows = all_rows(batch.size());
  const detail::BatchRef ref{batch, labels, rows};
  if (!baseline.initialized) {
    baseline.update(detail::accumulate(theta, nullptr, ref, subsets, 0.0, nullptr, nullptr) /
                    static_cast<double>(batch.size()));
  }
  std::vector<double> g(theta.d, 0.0);
  const double total = detail::accumulate(theta, &phi, ref, subsets, baseline.value, nullptr, &g);
  const auto dh = entropy_gradient(phi);
  const auto n = static_cast<double>(batch.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += n * dh[i];
  baseline.update(total / n);
  return g;
}

std::vector<double> grad_phi(const ProbeParameters& theta, const SamplerParameters& phi,
                             const ProbeDataset& batch, int samples, Rng& rng,
                             BaselineState& baseline) {
  if (samples < 1) throw Error("sample count must be at least 1");
  const auto subsets = sample_batch_subsets(phi, batch.size(), samples, rng);
  return grad_phi_from_samples(theta, phi, batch, subsets, baseline);
}

double exact_marginal_ll(const ProbeParameters& theta, const ProbeDataset& ds) {
  const std::size_t d = theta.d;
  if (d > kMaxEnumerableDims) {
    throw Error("exact marginal refused for d = " + std::to_string(d) + " (limit " +
                std::to_string(kMaxEnumerableDims) + ")");
  }
  const std::size_t classes = theta.num_classes();
  const auto labels = ds.label_indices();
  const double prior = log_prior(d);
  const std::uint64_t subsets = std::uint64_t{1} << d;
  std::vector<double> z(classes);
  std::vector<double> lp(classes);
  double total = 0.0;

  for (std::size_t n = 0; n < ds.size(); ++n) {
    const auto& h = ds.records[n].embedding;
    const auto cls = static_cast<std::size_t>(labels[n]);
    // Walk the subsets in Gray-code order: one dimension flips per step.
    std::copy(theta.bias.begin(), theta.bias.end(), z.begin());
    Inclusion inc(d, 0);
    double lse_max = -std::numeric_limits<double>::infinity();
    double lse_sum = 0.0;
    for (std::uint64_t step = 0; step < subsets; ++step) {
      if (step > 0) {
        const auto flip = static_cast<std::size_t>(std::countr_zero(step));
        const double sign = inc[flip] ? -1.0 : 1.0;
        inc[flip] ^= 1;
        for (std::size_t c = 0; c < classes; ++c) z[c] += sign * theta.weight(c, flip) * h[flip];
      }
      std::copy(z.begin(), z.end(), lp.begin());
      log_softmax_inplace(lp);
      const double term = lp[cls] + prior;
      if (term > lse_max) {
        lse_sum = lse_sum * std::exp(lse_max - term) + 1.0;
        lse_max = term;
      } else {
        lse_sum += std::exp(term - lse_max);
      }
    }
    total += lse_max + std::log(lse_sum);
  }
  return total;
}

double accuracy(const ProbeParameters& theta, const ProbeDataset& ds, const NeuronSubset& subset) {
  if (ds.empty()) return 0.0;
  const auto labels = ds.label_indices();
  const Inclusion inc = to_inclusion(subset);
  std::vector<double> lp(theta.num_classes());
  std::size_t correct = 0;
  for (std::size_t n = 0; n < ds.size(); ++n) {
    masked_log_softmax(theta, ds.records[n].embedding, inc, lp);
    const auto best = static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
    if (best == labels[n]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double mean_sampled_loglik(const ProbeParameters& theta, const SamplerParameters& phi,
                           const ProbeDataset& ds, int samples, Rng& rng) {
  if (ds.empty()) throw Error("empty dataset");
  const auto labels = ds.label_indices();
  const auto rows = all_rows(ds.size());
  const auto subsets = sample_batch_subsets(phi, ds.size(), samples, rng);
  const double total =
      detail::accumulate(theta, nullptr, {ds, labels, rows}, subsets, 0.0, nullptr, nullptr);
  return total / static_cast<double>(ds.size()) - log_prior(theta.d);
}

}  // namespace neuroprobe
