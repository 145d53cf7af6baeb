#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "neuroprobe/data.hpp"
#include "neuroprobe/probe.hpp"
#include "neuroprobe/random.hpp"

namespace fixture {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("neuroprobe-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::string> inventory(std::size_t classes) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < classes; ++c) out.push_back("v" + std::to_string(c));
  return out;
}

/// Gaussian embeddings, uniformly random labels, one lemma per token.
inline neuroprobe::ProbeDataset random_dataset(std::size_t d, std::size_t classes, std::size_t n,
                                               neuroprobe::Rng& rng) {
  neuroprobe::ProbeDataset ds;
  ds.language = "xx";
  ds.category = "Test";
  ds.model_id = "toy";
  ds.d = d;
  ds.inventory = inventory(classes);
  for (std::size_t t = 0; t < n; ++t) {
    neuroprobe::TokenRecord r;
    for (std::size_t i = 0; i < d; ++i) r.embedding.push_back(static_cast<float>(neuroprobe::standard_normal(rng)));
    r.label = ds.inventory[t < classes ? t : neuroprobe::uniform_below(rng, classes)];
    r.lemma = "l" + std::to_string(t);
    r.sentence_id = "s0";
    r.token_index = static_cast<int>(t);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

/// Weights and biases ~ scale * N(0, 1).
inline neuroprobe::ProbeParameters random_theta(std::size_t d, std::size_t classes, double scale,
                                                neuroprobe::Rng& rng) {
  auto theta = neuroprobe::ProbeParameters::zeros(inventory(classes), d);
  for (double& w : theta.weights) w = scale * neuroprobe::standard_normal(rng);
  for (double& b : theta.bias) b = scale * neuroprobe::standard_normal(rng);
  return theta;
}

inline std::vector<double> random_logits(std::size_t d, double scale, neuroprobe::Rng& rng) {
  std::vector<double> out(d);
  for (double& l : out) l = scale * neuroprobe::standard_normal(rng);
  return out;
}

}  // namespace fixture
