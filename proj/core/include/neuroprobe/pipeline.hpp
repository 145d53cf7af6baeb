#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "neuroprobe/data.hpp"
#include "neuroprobe/probe.hpp"
#include "neuroprobe/report.hpp"
#include "neuroprobe/stats.hpp"

namespace neuroprobe {

struct JobSpec {
  std::string model_id;
  std::string language;
  std::string category;
  std::filesystem::path dataset;

  bool operator==(const JobSpec&) const = default;
};

enum class SelectOn { test, dev };
enum class CorrectionFamily { category, global };

SelectOn parse_select_on(const std::string& text);
std::string to_string(SelectOn value);
CorrectionFamily parse_family(const std::string& text);
std::string to_string(CorrectionFamily value);

/// A whole analysis run. Parsed from a line-oriented `key = value` file;
/// see README.md for the keys.
struct RunManifest {
  std::vector<JobSpec> jobs;
  TrainConfig train;
  PreprocessConfig preprocess;
  std::size_t k = 50;
  std::uint64_t trials = 100000;
  double alpha = 0.05;
  std::uint64_t seed = 13;
  PValueMethod pvalue = PValueMethod::permutation;
  CorrectionFamily family = CorrectionFamily::category;
  SelectOn select_on = SelectOn::test;
  std::filesystem::path metadata;
  std::filesystem::path similarity;
  std::filesystem::path output_dir = "out";

  /// Duplicate jobs, missing files, out-of-range settings. Returns every
  /// problem found; empty means valid.
  std::vector<std::string> problems() const;
  void validate() const;
};

/// Parses manifest text. Relative paths resolve against `base_dir`.
/// `seed_override` (the PROBE_SEED value) replaces the `seed` key when set.
RunManifest parse_run_manifest_text(const std::string& text,
                                    const std::filesystem::path& base_dir,
                                    std::optional<std::uint64_t> seed_override = std::nullopt);
/// Reads the file and honours the PROBE_SEED environment variable.
RunManifest parse_run_manifest(const std::filesystem::path& path);
std::string format_run_manifest(const RunManifest& manifest);

/// Seeds for one job, derived from the run seed and the job identity.
PreprocessConfig job_preprocess(const RunManifest& manifest, const JobSpec& job);
TrainConfig job_train_config(const RunManifest& manifest, const JobSpec& job);

enum class JobState { trained, cached, failed };
std::string to_string(JobState state);

struct JobOutcome {
  JobSpec spec;
  JobState state = JobState::failed;
  std::string error;
  std::filesystem::path directory;
  std::filesystem::path probe_file;
  std::filesystem::path neurons_file;
};

struct RunSummary {
  std::vector<JobOutcome> jobs;
  std::vector<std::filesystem::path> matrices;
  std::vector<std::filesystem::path> heatmaps;
  std::vector<std::filesystem::path> tables;

  std::size_t failed() const;
  bool ok() const { return failed() == 0; }
};

struct RunOptions {
  unsigned workers = 1;
};

std::filesystem::path job_directory(const RunManifest& manifest, const JobSpec& job);

/// split -> filter -> train -> select for one job, skipped when the job's
/// content-hash marker matches. Never throws; failures land in the outcome.
JobOutcome run_job(const RunManifest& manifest, const JobSpec& job);

/// Builds the overlap matrices from the neuron files of the successful jobs,
/// runs every analysis, and writes matrices/<model>__<category>.json.
AnalysisBundle analyze_run(const RunManifest& manifest, const std::vector<JobOutcome>& jobs,
                           std::vector<std::filesystem::path>* matrix_files = nullptr);

/// Reads matrices/<model>__<category>.json back from a previous run and
/// recomputes the analyses.
AnalysisBundle load_matrices_and_analyze(const RunManifest& manifest);

/// Heatmaps under figures/ and tables under tables/.
void write_report(const RunManifest& manifest, const AnalysisBundle& bundle, RunSummary& summary);

/// All phases. Jobs run on a pool of `options.workers` threads.
RunSummary run_pipeline(const RunManifest& manifest, const RunOptions& options = {});

void write_run_summary(const RunSummary& summary, const std::filesystem::path& path);

}  // namespace neuroprobe
