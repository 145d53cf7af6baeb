#include "neuroprobe/train.hpp"

#include <cmath>
#include <numeric>

#include "neuroprobe/error.hpp"
#include "probe_kernels.hpp"

namespace neuroprobe {

namespace {

// Adam moments for one flat parameter block.
class Adam {
 public:
  explicit Adam(std::size_t size) : m_(size, 0.0), v_(size, 0.0) {}

  /// Ascent step on `params` along `grad`.
  void step(std::span<double> params, std::span<const double> grad, double lr, int t) {
    const double c1 = 1.0 - std::pow(kBeta1, t);
    const double c2 = 1.0 - std::pow(kBeta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grad[i];
      v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      params[i] += lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  std::vector<double> m_;
  std::vector<double> v_;
};

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

TrainResult train(const SplitDataset& sd, const TrainConfig& cfg) {
  cfg.validate();
  const ProbeDataset& train_set = sd.train;
  const ProbeDataset& dev_set = sd.dev;
  if (train_set.empty() || dev_set.empty()) throw Error("train and dev splits must be non-empty");
  if (train_set.inventory.size() < 2) throw Error("inventory needs at least 2 values");
  const std::size_t d = train_set.d;

  Rng init_rng(derive_seed(cfg.seed, "init"));
  Rng train_rng(derive_seed(cfg.seed, "train"));
  const std::uint64_t dev_seed = derive_seed(cfg.seed, "dev");

  ProbeParameters theta = ProbeParameters::random_init(train_set.inventory, d, init_rng);
  SamplerParameters phi = SamplerParameters::uniform(d);
  BaselineState baseline;
  baseline.decay = cfg.baseline_decay;

  Adam adam_w(theta.weights.size());
  Adam adam_b(theta.bias.size());
  Adam adam_phi(d);

  const auto labels = train_set.label_indices();
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  result.probe = theta;
  result.sampler = phi;
  result.best_dev_elbo = -std::numeric_limits<double>::infinity();
  int since_best = 0;
  int step = 0;

  ProbeGradient grad{std::vector<double>(theta.weights.size()), std::vector<double>(theta.bias.size())};
  std::vector<double> grad_logits(d);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), train_rng);
    double epoch_objective = 0.0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, stop - start);
      const auto batch_n = static_cast<double>(rows.size());
      const auto subsets = sample_batch_subsets(phi, rows.size(), cfg.mc_samples, train_rng);
      const detail::BatchRef ref{train_set, labels, rows};

      std::fill(grad.weights.begin(), grad.weights.end(), 0.0);
      std::fill(grad.bias.begin(), grad.bias.end(), 0.0);
      std::fill(grad_logits.begin(), grad_logits.end(), 0.0);
      if (!baseline.initialized) {
        baseline.update(detail::accumulate(theta, nullptr, ref, subsets, 0.0, nullptr, nullptr) / batch_n);
      }
      const double total =
          detail::accumulate(theta, &phi, ref, subsets, baseline.value, &grad, &grad_logits);
      baseline.update(total / batch_n);

      const double h = entropy(phi);
      const double objective = total + batch_n * h;
      if (!std::isfinite(objective)) {
        throw Error("training diverged at epoch " + std::to_string(epoch) +
                    ": non-finite objective");
      }
      epoch_objective += objective;

      // Per-token gradients; the prior is constant and contributes nothing.
      const auto dh = entropy_gradient(phi);
      for (double& g : grad.weights) g /= batch_n;
      for (double& g : grad.bias) g /= batch_n;
      for (std::size_t i = 0; i < d; ++i) grad_logits[i] = grad_logits[i] / batch_n + dh[i];

      ++step;
      adam_w.step(theta.weights, grad.weights, cfg.learning_rate, step);
      adam_b.step(theta.bias, grad.bias, cfg.learning_rate, step);
      adam_phi.step(phi.logits, grad_logits, cfg.learning_rate, step);
      if (!all_finite(theta.weights) || !all_finite(theta.bias) || !all_finite(phi.logits)) {
        throw Error("training diverged at epoch " + std::to_string(epoch) +
                    ": non-finite parameters");
      }
    }

    Rng dev_rng(dev_seed);
    const double dev_elbo = elbo_estimate(theta, phi, dev_set, cfg.mc_samples, dev_rng);
    if (!std::isfinite(dev_elbo)) {
      throw Error("training diverged at epoch " + std::to_string(epoch) + ": non-finite dev bound");
    }
    result.trace.push_back({epoch, epoch_objective / static_cast<double>(train_set.size()), dev_elbo});

    if (dev_elbo > result.best_dev_elbo) {
      result.best_dev_elbo = dev_elbo;
      result.best_epoch = epoch;
      result.probe = theta;
      result.sampler = phi;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

}  // namespace neuroprobe
