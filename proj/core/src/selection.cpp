#include "neuroprobe/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neuroprobe/error.hpp"

namespace neuroprobe {

double eval_loglik(const ProbeParameters& theta, const ProbeDataset& eval_set,
                   const NeuronSubset& subset) {
  if (subset.d != theta.d) throw Error("subset dimensionality does not match the probe");
  const Inclusion inc = to_inclusion(subset);
  const auto labels = eval_set.label_indices();
  std::vector<double> lp(theta.num_classes());
  double total = 0.0;
  for (std::size_t n = 0; n < eval_set.size(); ++n) {
    masked_log_softmax(theta, eval_set.records[n].embedding, inc, lp);
    total += lp[static_cast<std::size_t>(labels[n])];
  }
  return total;
}

NeuronSubset greedy_select(const ProbeParameters& theta, const ProbeDataset& eval_set,
                           std::size_t k, CandidateDump* dump) {
  const std::size_t d = theta.d;
  const std::size_t classes = theta.num_classes();
  if (k == 0) throw Error("k must be positive");
  if (k > d) throw Error("k = " + std::to_string(k) + " exceeds d = " + std::to_string(d));
  if (eval_set.empty()) throw Error("greedy selection needs a non-empty evaluation set");
  if (eval_set.d != d) throw Error("evaluation set dimensionality does not match the probe");
  if (eval_set.inventory != theta.inventory_order) {
    throw Error("evaluation set inventory does not match the probe's class order");
  }

  const auto labels = eval_set.label_indices();
  const std::size_t n_records = eval_set.size();
  // Logits of every record under the current selection.
  std::vector<double> z(n_records * classes);
  for (std::size_t n = 0; n < n_records; ++n) {
    std::copy(theta.bias.begin(), theta.bias.end(), z.begin() + static_cast<std::ptrdiff_t>(n * classes));
  }

  NeuronSubset out = NeuronSubset::empty(d);
  std::vector<std::uint8_t> taken(d, 0);
  std::vector<double> cand(classes);
  if (dump) dump->clear();

  for (std::size_t step = 0; step < k; ++step) {
    std::vector<double> scores(d, -std::numeric_limits<double>::infinity());
    std::size_t best = d;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d; ++i) {
      if (taken[i]) continue;
      double score = 0.0;
      for (std::size_t n = 0; n < n_records; ++n) {
        const double x = eval_set.records[n].embedding[i];
        const double* zn = z.data() + n * classes;
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < classes; ++c) {
          cand[c] = zn[c] + theta.weight(c, i) * x;
          top = std::max(top, cand[c]);
        }
        double sum = 0.0;
        for (std::size_t c = 0; c < classes; ++c) sum += std::exp(cand[c] - top);
        score += cand[static_cast<std::size_t>(labels[n])] - top - std::log(sum);
      }
      scores[i] = score;
      if (best == d || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    taken[best] = 1;
    out.dims.push_back(best);
    out.selection_trace.push_back(best_score);
    for (std::size_t n = 0; n < n_records; ++n) {
      const double x = eval_set.records[n].embedding[best];
      for (std::size_t c = 0; c < classes; ++c) z[n * classes + c] += theta.weight(c, best) * x;
    }
    if (dump) dump->push_back(std::move(scores));
  }
  return out;
}

}  // namespace neuroprobe
