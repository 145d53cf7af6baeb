#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace neuroprobe {

/// One labelled embedding: a token of the treebank together with the
/// category value it carries and the lemma that decides its split.
struct TokenRecord {
  std::vector<float> embedding;
  std::string lemma;
  std::string label;
  std::string sentence_id;
  std::uint64_t token_index = 0;

  bool operator==(const TokenRecord&) const = default;
};

/// Labelled embeddings of one (language, category, model, layer).
///
/// `inventory` is kept in lexicographic order; the position of a value in it
/// is the output-class index used by the probe.
struct ProbeDataset {
  std::string language;
  std::string category;
  std::string model_id;
  int layer = -1;
  std::size_t d = 0;
  std::vector<std::string> inventory;
  std::vector<TokenRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  /// Class index of every record's label, in record order.
  std::vector<int> label_indices() const;
  /// Index of `value` in the inventory; throws if absent.
  int class_index(const std::string& value) const;

  /// Checks the dataset invariants (d > 0, >= 2 distinct values, every
  /// label declared, every embedding of length d). Throws neuroprobe::Error.
  void validate() const;

  /// Copy of the metadata with no records.
  ProbeDataset empty_like() const;

  bool operator==(const ProbeDataset&) const = default;
};

enum class SplitPart { train = 0, dev = 1, test = 2 };

struct SplitRatios {
  double train = 0.65;
  double dev = 0.10;
  double test = 0.25;

  bool operator==(const SplitRatios&) const = default;

  std::array<double, 3> as_array() const { return {train, dev, test}; }
};

struct SplitDataset {
  ProbeDataset train;
  ProbeDataset dev;
  ProbeDataset test;
  std::uint64_t split_seed = 0;
  SplitRatios ratios;

  const ProbeDataset& part(SplitPart p) const;
  ProbeDataset& part(SplitPart p);
};

enum class FilterMode { value, lemma };

FilterMode parse_filter_mode(const std::string& text);
std::string to_string(FilterMode mode);
SplitRatios parse_ratios(const std::string& text);

/// Reads a dataset manifest and its float32 embedding blob.
///
/// The blob is the manifest's `blob` field resolved against the manifest's
/// directory, or `<stem>.bin` next to it when the field is absent.
ProbeDataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes `<path>` and its sibling `<stem>.bin`. Inverse of load_dataset.
void save_dataset(const ProbeDataset& ds, const std::filesystem::path& manifest_path);

std::filesystem::path blob_path_for(const std::filesystem::path& manifest_path);

/// Lemma-disjoint split. Lemmata are shuffled with `seed`, stably ordered by
/// descending token count, then each goes to the split furthest below its
/// target token share. Record order inside a split follows the source order.
SplitDataset lemma_split(const ProbeDataset& ds, const SplitRatios& ratios, std::uint64_t seed);

/// Frequency filtering inside each split.
///
/// value mode: values with fewer than `min_count` tokens in a split lose all
/// their tokens in that split; the inventory becomes the values surviving in
/// all three splits. lemma mode: lemmata with fewer than `min_count` tokens in
/// their split are dropped, then the inventory is recomputed the same way.
SplitDataset filter_min_count(const SplitDataset& sd, int min_count,
                              FilterMode mode = FilterMode::value);

struct PreprocessConfig {
  SplitRatios ratios;
  std::uint64_t seed = 0;
  int min_count = 20;
  FilterMode filter_mode = FilterMode::value;

  bool operator==(const PreprocessConfig&) const = default;
};

/// lemma_split followed by filter_min_count.
SplitDataset preprocess(const ProbeDataset& ds, const PreprocessConfig& cfg);

/// Token count per label present in the dataset.
std::map<std::string, std::size_t> value_inventory(const ProbeDataset& ds);

}  // namespace neuroprobe
