#include "neuroprobe/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "neuroprobe/error.hpp"
#include "neuroprobe/random.hpp"

namespace neuroprobe {

namespace {

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

void finish_correlation(CorrelationResult& r) {
  if (r.x.size() < 3) {
    r.note = "fewer than 3 points";
    return;
  }
  try {
    r.rho = spearman(r.x, r.y);
  } catch (const Error&) {
    r.note = "zero rank variance";
  }
}

std::string pair_label(const std::string& a, const std::string& b) { return a + "|" + b; }

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> CategoryOverlapMatrix::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) out.emplace_back(i, j);
  }
  return out;
}

std::vector<OverlapRecord> CategoryOverlapMatrix::records() const {
  std::vector<OverlapRecord> out;
  for (auto [i, j] : pairs()) {
    out.push_back({languages[i], languages[j], category, model_id, overlap[at(i, j)], k, d,
                   p_values[at(i, j)], significant[at(i, j)] != 0});
  }
  return out;
}

CategoryOverlapMatrix build_matrix(std::string model_id, std::string category,
                                   const std::vector<std::string>& languages,
                                   const std::map<std::string, NeuronSubset>& subsets,
                                   const MatrixOptions& options) {
  if (languages.size() < 2) throw Error("an overlap matrix needs at least 2 languages");
  if (std::set<std::string>(languages.begin(), languages.end()).size() != languages.size()) {
    throw Error("duplicate language in overlap matrix");
  }
  CategoryOverlapMatrix mat;
  mat.model_id = std::move(model_id);
  mat.category = std::move(category);
  mat.languages = languages;
  for (std::size_t i = 0; i < languages.size(); ++i) {
    auto it = subsets.find(languages[i]);
    if (it == subsets.end()) throw Error("no neuron subset for language " + languages[i]);
    const NeuronSubset& s = it->second;
    s.validate();
    if (i == 0) {
      mat.k = s.k();
      mat.d = s.d;
    } else if (s.k() != mat.k || s.d != mat.d) {
      throw Error("inconsistent k or d across languages in " + mat.model_id + "/" + mat.category);
    }
  }
  if (mat.k == 0) throw Error("neuron subsets must be non-empty");

  const std::size_t L = languages.size();
  mat.overlap.assign(L * L, 0);
  mat.overlap_pct.assign(L * L, 0.0);
  mat.p_values.assign(L * L, 0.0);
  mat.significant.assign(L * L, 0);

  PValueFamily family;
  family.alpha = options.alpha;
  for (std::size_t i = 0; i < L; ++i) {
    mat.overlap[mat.at(i, i)] = mat.k;
    mat.overlap_pct[mat.at(i, i)] = 100.0;
  }
  for (auto [i, j] : mat.pairs()) {
    const std::size_t m = overlap_count(subsets.at(languages[i]), subsets.at(languages[j]));
    double p = 0.0;
    if (options.method == PValueMethod::exact) {
      p = hypergeom_tail(mat.d, mat.k, m);
    } else {
      const auto seed = derive_seed(options.seed, mat.model_id + "\x1f" + mat.category + "\x1f" +
                                                      languages[i] + "\x1f" + languages[j]);
      p = permutation_pvalue(mat.d, mat.k, m, options.trials, seed);
    }
    const double pct = 100.0 * static_cast<double>(m) / static_cast<double>(mat.k);
    for (auto idx : {mat.at(i, j), mat.at(j, i)}) {
      mat.overlap[idx] = m;
      mat.overlap_pct[idx] = pct;
      mat.p_values[idx] = p;
    }
    family.tests.push_back({pair_label(languages[i], languages[j]), p});
  }
  family = holm_bonferroni(std::move(family));
  const auto pairs = mat.pairs();
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const auto [i, j] = pairs[t];
    const std::uint8_t flag = family.rejections[t] ? 1 : 0;
    mat.significant[mat.at(i, j)] = flag;
    mat.significant[mat.at(j, i)] = flag;
  }
  return mat;
}

void apply_global_correction(std::vector<CategoryOverlapMatrix>& matrices, double alpha) {
  PValueFamily family;
  family.alpha = alpha;
  std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> where;
  for (std::size_t m = 0; m < matrices.size(); ++m) {
    for (auto pr : matrices[m].pairs()) {
      family.tests.push_back({matrices[m].model_id + "/" + matrices[m].category,
                              matrices[m].p_values[matrices[m].at(pr.first, pr.second)]});
      where.emplace_back(m, pr);
    }
  }
  if (family.tests.empty()) return;
  family = holm_bonferroni(std::move(family));
  for (std::size_t t = 0; t < where.size(); ++t) {
    auto& mat = matrices[where[t].first];
    const auto [i, j] = where[t].second;
    const std::uint8_t flag = family.rejections[t] ? 1 : 0;
    mat.significant[mat.at(i, j)] = flag;
    mat.significant[mat.at(j, i)] = flag;
  }
}

SignificantProportion significant_proportion(const CategoryOverlapMatrix& matrix) {
  SignificantProportion out{matrix.model_id, matrix.category, 0, matrix.pair_count(), 0.0};
  for (auto [i, j] : matrix.pairs()) out.significant += matrix.significant[matrix.at(i, j)];
  if (out.total > 0) out.proportion = static_cast<double>(out.significant) / static_cast<double>(out.total);
  return out;
}

std::vector<OverlapDistribution> overlap_distribution(
    const std::vector<CategoryOverlapMatrix>& matrices) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const auto& mat : matrices) {
    auto& values = groups[{mat.model_id, mat.category}];
    for (auto [i, j] : mat.pairs()) values.push_back(mat.overlap_pct[mat.at(i, j)]);
  }
  std::vector<OverlapDistribution> out;
  for (auto& [key, values] : groups) {
    OverlapDistribution dist{key.first, key.second, values, mean_of(values), median_of(values)};
    out.push_back(std::move(dist));
  }
  return out;
}

std::vector<GenusContrast> genus_contrast(const std::vector<CategoryOverlapMatrix>& matrices,
                                          const MetadataTable& metadata) {
  std::vector<GenusContrast> out;
  for (const auto& mat : matrices) {
    GenusContrast gc{mat.model_id, mat.category, std::nullopt, std::nullopt, 0, 0, 0};
    std::vector<double> within, cross;
    for (auto [i, j] : mat.pairs()) {
      const auto* a = metadata.find(mat.languages[i]);
      const auto* b = metadata.find(mat.languages[j]);
      if (!a || !b || a->genus.empty() || b->genus.empty()) {
        ++gc.excluded_pairs;
        continue;
      }
      (a->genus == b->genus ? within : cross).push_back(mat.overlap_pct[mat.at(i, j)]);
    }
    gc.within_pairs = within.size();
    gc.cross_pairs = cross.size();
    if (!within.empty()) gc.within_mean = mean_of(within);
    if (!cross.empty()) gc.cross_mean = mean_of(cross);
    out.push_back(std::move(gc));
  }
  return out;
}

std::vector<double> language_mean_overlap(const CategoryOverlapMatrix& matrix) {
  const std::size_t L = matrix.size();
  std::vector<double> out(L, 0.0);
  if (L < 2) return out;
  for (std::size_t i = 0; i < L; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      if (j != i) sum += matrix.overlap_pct[matrix.at(i, j)];
    }
    out[i] = sum / static_cast<double>(L - 1);
  }
  return out;
}

std::vector<CorrelationResult> correlate_num_values(
    const std::vector<CategoryOverlapMatrix>& matrices, const InventorySizes& inventories) {
  std::vector<CorrelationResult> out;
  for (const auto& mat : matrices) {
    CorrelationResult r;
    r.analysis = "num_values";
    r.model_id = mat.model_id;
    r.category = mat.category;
    const auto means = language_mean_overlap(mat);
    for (std::size_t i = 0; i < mat.size(); ++i) {
      auto it = inventories.find({mat.languages[i], mat.category});
      if (it == inventories.end()) {
        ++r.dropped;
        continue;
      }
      r.labels.push_back(mat.languages[i]);
      r.x.push_back(static_cast<double>(it->second));
      r.y.push_back(means[i]);
    }
    finish_correlation(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CorrelationResult> correlate_typology(
    const std::vector<CategoryOverlapMatrix>& matrices, const MetadataTable& metadata) {
  std::vector<CorrelationResult> out;
  for (const auto& mat : matrices) {
    CorrelationResult r;
    r.analysis = "typology";
    r.model_id = mat.model_id;
    r.category = mat.category;
    for (auto [i, j] : mat.pairs()) {
      const auto sim = metadata.similarity(mat.languages[i], mat.languages[j]);
      if (!sim) {
        ++r.dropped;
        continue;
      }
      r.labels.push_back(pair_label(mat.languages[i], mat.languages[j]));
      r.x.push_back(*sim);
      r.y.push_back(mat.overlap_pct[mat.at(i, j)]);
    }
    finish_correlation(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CorrelationResult> correlate_data_size(
    const std::vector<CategoryOverlapMatrix>& matrices, const MetadataTable& metadata) {
  std::vector<CorrelationResult> out;
  for (const auto& mat : matrices) {
    CorrelationResult r;
    r.analysis = "data_size";
    r.model_id = mat.model_id;
    r.category = mat.category;
    const auto means = language_mean_overlap(mat);
    for (std::size_t i = 0; i < mat.size(); ++i) {
      const auto* entry = metadata.find(mat.languages[i]);
      if (!entry || !entry->pretrain_size_gib) {
        ++r.dropped;
        continue;
      }
      r.labels.push_back(mat.languages[i]);
      r.x.push_back(*entry->pretrain_size_gib);
      r.y.push_back(means[i]);
    }
    finish_correlation(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace neuroprobe
