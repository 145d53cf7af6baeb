#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "neuroprobe/analysis.hpp"
#include "neuroprobe/data.hpp"
#include "neuroprobe/probe.hpp"
#include "neuroprobe/subset.hpp"
#include "neuroprobe/train.hpp"

namespace neuroprobe {

/// Contents of a trained probe file.
struct ProbeFile {
  std::string language;
  std::string category;
  std::string model_id;
  ProbeParameters probe;
  SamplerParameters sampler;
  TrainConfig train_config;
  PreprocessConfig preprocess;
  double best_dev_elbo = 0.0;
  int best_epoch = 0;
  std::vector<EpochRecord> trace;
};

/// Contents of a selected-neurons file.
struct NeuronsFile {
  std::string language;
  std::string category;
  std::string model_id;
  NeuronSubset subset;
};

void save_probe_file(const ProbeFile& file, const std::filesystem::path& path);
ProbeFile load_probe_file(const std::filesystem::path& path);

void save_neurons_file(const NeuronsFile& file, const std::filesystem::path& path);
NeuronsFile load_neurons_file(const std::filesystem::path& path);

void save_matrix_file(const CategoryOverlapMatrix& matrix, const std::filesystem::path& path);
CategoryOverlapMatrix load_matrix_file(const std::filesystem::path& path);

/// Writes `contents` to `path`, creating parent directories. Throws on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace neuroprobe
