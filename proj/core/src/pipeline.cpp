#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "neuroprobe/error.hpp"
#include "neuroprobe/hash.hpp"
#include "neuroprobe/metadata.hpp"
#include "neuroprobe/pipeline.hpp"
#include "neuroprobe/random.hpp"
#include "neuroprobe/selection.hpp"
#include "neuroprobe/serialize.hpp"
#include "neuroprobe/train.hpp"

namespace neuroprobe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kSep = '\x1f';
constexpr const char* kMarkerName = "marker";

// Keeps path components portable; anything outside [A-Za-z0-9._-] becomes '_'.
std::string path_token(const std::string& s) {
  std::string out = s;
  for (auto& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return out.empty() ? "_" : out;
}

std::string job_key(const JobSpec& job) {
  return job.model_id + kSep + job.language + kSep + job.category;
}

fs::path dataset_blob(const fs::path& manifest_path) {
  const json doc = json::parse(read_text_file(manifest_path));
  if (doc.contains("blob")) return manifest_path.parent_path() / doc.at("blob").get<std::string>();
  return blob_path_for(manifest_path);
}

std::string job_marker(const RunManifest& manifest, const JobSpec& job) {
  const auto pre = job_preprocess(manifest, job);
  const auto cfg = job_train_config(manifest, job);
  json config = {
      {"key", job_key(job)},
      {"ratios", {pre.ratios.train, pre.ratios.dev, pre.ratios.test}},
      {"split_seed", pre.seed},
      {"min_count", pre.min_count},
      {"filter_mode", to_string(pre.filter_mode)},
      {"lr", cfg.learning_rate},
      {"batch", cfg.batch_size},
      {"epochs", cfg.max_epochs},
      {"patience", cfg.patience},
      {"samples", cfg.mc_samples},
      {"train_seed", cfg.seed},
      {"baseline_decay", cfg.baseline_decay},
      {"k", manifest.k},
      {"select_on", to_string(manifest.select_on)},
  };
  ContentHash h;
  h.update_file(job.dataset.string());
  h.update_file(dataset_blob(job.dataset).string());
  h.update(config.dump());
  return h.hex();
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  return p.lexically_relative(base).generic_string();
}

fs::path matrix_path(const RunManifest& manifest, const std::string& model, const std::string& category) {
  return manifest.output_dir / "matrices" / (path_token(model) + "__" + path_token(category) + ".json");
}

MetadataTable load_tables(const RunManifest& manifest) {
  MetadataTable table;
  if (!manifest.metadata.empty()) table = load_metadata_csv(manifest.metadata);
  if (!manifest.similarity.empty()) load_similarity_csv(manifest.similarity, table);
  return table;
}

}  // namespace

std::string to_string(JobState state) {
  switch (state) {
    case JobState::trained: return "trained";
    case JobState::cached: return "cached";
    case JobState::failed: return "failed";
  }
  return "failed";
}

std::size_t RunSummary::failed() const {
  return static_cast<std::size_t>(
      std::count_if(jobs.begin(), jobs.end(), [](const JobOutcome& j) { return j.state == JobState::failed; }));
}

PreprocessConfig job_preprocess(const RunManifest& manifest, const JobSpec& job) {
  PreprocessConfig cfg = manifest.preprocess;
  // The split depends on the tokens, not on the encoder, so all models of one
  // (language, category) share it.
  cfg.seed = derive_seed(manifest.seed, "split" + std::string(1, kSep) + job.language + kSep + job.category);
  return cfg;
}

TrainConfig job_train_config(const RunManifest& manifest, const JobSpec& job) {
  TrainConfig cfg = manifest.train;
  cfg.seed = derive_seed(manifest.seed, "train" + std::string(1, kSep) + job_key(job));
  return cfg;
}

fs::path job_directory(const RunManifest& manifest, const JobSpec& job) {
  return manifest.output_dir / "jobs" / path_token(job.model_id) / path_token(job.category) /
         path_token(job.language);
}

JobOutcome run_job(const RunManifest& manifest, const JobSpec& job) {
  JobOutcome out;
  out.spec = job;
  out.directory = job_directory(manifest, job);
  out.probe_file = out.directory / "probe.json";
  out.neurons_file = out.directory / "neurons.json";
  const fs::path marker_file = out.directory / kMarkerName;
  try {
    const std::string marker = job_marker(manifest, job);
    if (fs::exists(marker_file) && fs::exists(out.probe_file) && fs::exists(out.neurons_file) &&
        read_text_file(marker_file) == marker + "\n") {
      out.state = JobState::cached;
      return out;
    }
    fs::remove(marker_file);

    const ProbeDataset ds = load_dataset(job.dataset);
    const PreprocessConfig pre = job_preprocess(manifest, job);
    const TrainConfig cfg = job_train_config(manifest, job);
    const SplitDataset sd = preprocess(ds, pre);
    const TrainResult result = train(sd, cfg);
    const ProbeDataset& eval_set = manifest.select_on == SelectOn::test ? sd.test : sd.dev;
    NeuronSubset subset = greedy_select(result.probe, eval_set, manifest.k);

    ProbeFile pf;
    pf.language = job.language;
    pf.category = job.category;
    pf.model_id = job.model_id;
    pf.probe = result.probe;
    pf.sampler = result.sampler;
    pf.train_config = cfg;
    pf.preprocess = pre;
    pf.best_dev_elbo = result.best_dev_elbo;
    pf.best_epoch = result.best_epoch;
    pf.trace = result.trace;
    save_probe_file(pf, out.probe_file);
    save_neurons_file({job.language, job.category, job.model_id, std::move(subset)}, out.neurons_file);
    write_text_file(marker_file, marker + "\n");
    out.state = JobState::trained;
  } catch (const std::exception& e) {
    out.state = JobState::failed;
    out.error = e.what();
  }
  return out;
}

AnalysisBundle analyze_run(const RunManifest& manifest, const std::vector<JobOutcome>& jobs,
                           std::vector<fs::path>* matrix_files) {
  const MetadataTable metadata = load_tables(manifest);
  std::map<std::pair<std::string, std::string>, std::map<std::string, NeuronSubset>> groups;
  InventorySizes inventories;
  for (const auto& job : jobs) {
    if (job.state == JobState::failed) continue;
    const NeuronsFile nf = load_neurons_file(job.neurons_file);
    groups[{job.spec.model_id, job.spec.category}][job.spec.language] = nf.subset;
    const ProbeFile pf = load_probe_file(job.probe_file);
    inventories[{job.spec.language, job.spec.category}] = pf.probe.inventory_order.size();
  }

  std::vector<CategoryOverlapMatrix> matrices;
  for (const auto& [key, subsets] : groups) {
    if (subsets.size() < 2) continue;
    std::vector<std::string> languages;
    for (const auto& [lang, _] : subsets) languages.push_back(lang);
    languages = metadata.order(std::move(languages));
    MatrixOptions options;
    options.trials = manifest.trials;
    options.seed = derive_seed(manifest.seed, "overlap");
    options.alpha = manifest.alpha;
    options.method = manifest.pvalue;
    matrices.push_back(build_matrix(key.first, key.second, languages, subsets, options));
  }

  if (manifest.family == CorrectionFamily::global) {
    std::map<std::string, std::vector<CategoryOverlapMatrix>> by_model;
    for (auto& m : matrices) by_model[m.model_id].push_back(std::move(m));
    matrices.clear();
    for (auto& [_, group] : by_model) {
      apply_global_correction(group, manifest.alpha);
      for (auto& m : group) matrices.push_back(std::move(m));
    }
  }

  for (const auto& m : matrices) {
    const fs::path p = matrix_path(manifest, m.model_id, m.category);
    save_matrix_file(m, p);
    if (matrix_files) matrix_files->push_back(p);
  }
  return run_analyses(std::move(matrices), metadata, inventories);
}

AnalysisBundle load_matrices_and_analyze(const RunManifest& manifest) {
  const MetadataTable metadata = load_tables(manifest);
  const fs::path dir = manifest.output_dir / "matrices";
  if (!fs::is_directory(dir)) throw Error("no matrices under " + dir.string() + "; run 'analyze' first");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CategoryOverlapMatrix> matrices;
  for (const auto& f : files) matrices.push_back(load_matrix_file(f));

  InventorySizes inventories;
  for (const auto& job : manifest.jobs) {
    const fs::path pf = job_directory(manifest, job) / "probe.json";
    if (!fs::exists(pf)) continue;
    inventories[{job.language, job.category}] = load_probe_file(pf).probe.inventory_order.size();
  }
  return run_analyses(std::move(matrices), metadata, inventories);
}

void write_report(const RunManifest& manifest, const AnalysisBundle& bundle, RunSummary& summary) {
  for (const auto& m : bundle.matrices) {
    const fs::path p = manifest.output_dir / "figures" /
                       (path_token(m.model_id) + "__" + path_token(m.category) + ".svg");
    emit_heatmap(m, p);
    summary.heatmaps.push_back(p);
  }
  const auto tables = emit_tables(bundle, manifest.output_dir / "tables");
  summary.tables.insert(summary.tables.end(), tables.begin(), tables.end());
}

RunSummary run_pipeline(const RunManifest& manifest, const RunOptions& options) {
  manifest.validate();
  RunSummary summary;
  summary.jobs.resize(manifest.jobs.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(manifest.jobs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < manifest.jobs.size(); i = next++) {
      summary.jobs[i] = run_job(manifest, manifest.jobs[i]);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  const AnalysisBundle bundle = analyze_run(manifest, summary.jobs, &summary.matrices);
  write_report(manifest, bundle, summary);
  write_run_summary(summary, manifest.output_dir / "run_summary.json");
  return summary;
}

void write_run_summary(const RunSummary& summary, const fs::path& path) {
  const fs::path base = path.parent_path();
  json doc;
  doc["jobs"] = json::array();
  for (const auto& j : summary.jobs) {
    json entry = {{"model_id", j.spec.model_id},
                  {"language", j.spec.language},
                  {"category", j.spec.category},
                  {"state", to_string(j.state)}};
    if (j.state == JobState::failed) {
      entry["error"] = j.error;
    } else {
      entry["directory"] = relative_to(j.directory, base);
    }
    doc["jobs"].push_back(std::move(entry));
  }
  doc["failed"] = summary.failed();
  auto list = [&](const std::vector<fs::path>& paths) {
    json arr = json::array();
    for (const auto& p : paths) arr.push_back(relative_to(p, base));
    return arr;
  };
  doc["matrices"] = list(summary.matrices);
  doc["heatmaps"] = list(summary.heatmaps);
  doc["tables"] = list(summary.tables);
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace neuroprobe
