#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "neuroprobe/data.hpp"

namespace neuroprobe {

/// Synthetic "language": Gaussian embeddings with class information planted
/// in a few dimensions.
///
/// On every planted dimension the class means are evenly spaced `offset`
/// apart (centred on 0, with a per-dimension random sign); every dimension
/// carries unit Gaussian noise. Tokens are spread over `lemmata` lemmata
/// as evenly as possible, and labels are cycled so classes stay balanced.
struct PlantedSpec {
  std::string language = "syn";
  std::string category = "Synthetic";
  std::string model_id = "synthetic";
  std::size_t d = 64;
  std::size_t num_classes = 3;
  double offset = 2.0;
  std::vector<std::size_t> planted_dims;
  std::size_t tokens = 5000;
  std::size_t lemmata = 150;
  std::uint64_t seed = 0;
  /// Permute labels after generation, destroying the signal.
  bool shuffle_labels = false;
};

/// `count` distinct dimensions of [0, d) chosen by `seed`, ascending.
std::vector<std::size_t> choose_planted_dims(std::size_t d, std::size_t count, std::uint64_t seed);

ProbeDataset make_planted_dataset(const PlantedSpec& spec);

/// Split ratios that reproduce 3000 / 500 / 1500 tokens out of 5000.
SplitRatios planted_split_ratios();

struct OverlapFixture {
  std::filesystem::path manifest;
  std::vector<std::string> languages;
  std::vector<std::vector<std::size_t>> planted;
};

/// Four languages: "aaa" and "bbb" share planted dimensions, "ccc" and "ddd"
/// each use their own, all three sets disjoint. Writes datasets under
/// `dir/data`, metadata.csv, similarity.csv and run.cfg (k = 10).
OverlapFixture write_overlap_fixture(const std::filesystem::path& dir, std::uint64_t seed,
                                     std::uint64_t trials = 100000);

}  // namespace neuroprobe
