#include "neuroprobe/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "neuroprobe/error.hpp"
#include "neuroprobe/random.hpp"

namespace neuroprobe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

float float_from_le(const unsigned char* bytes) {
  std::uint32_t bits = 0;
  for (int b = 3; b >= 0; --b) bits = (bits << 8) | bytes[b];
  return std::bit_cast<float>(bits);
}

void float_to_le(float value, unsigned char* bytes) {
  auto bits = std::bit_cast<std::uint32_t>(value);
  for (int b = 0; b < 4; ++b) {
    bytes[b] = static_cast<unsigned char>(bits & 0xffu);
    bits >>= 8;
  }
}

}  // namespace

std::vector<int> ProbeDataset::label_indices() const {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < inventory.size(); ++i) index.emplace(inventory[i], static_cast<int>(i));
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = index.find(r.label);
    if (it == index.end()) throw Error("label '" + r.label + "' not in inventory");
    out.push_back(it->second);
  }
  return out;
}

int ProbeDataset::class_index(const std::string& value) const {
  auto it = std::find(inventory.begin(), inventory.end(), value);
  if (it == inventory.end()) throw Error("label '" + value + "' not in inventory");
  return static_cast<int>(it - inventory.begin());
}

void ProbeDataset::validate() const {
  if (d == 0) throw Error("dataset dimensionality d must be positive");
  if (inventory.size() < 2) throw Error("inventory needs at least 2 values");
  std::set<std::string> seen(inventory.begin(), inventory.end());
  if (seen.size() != inventory.size()) throw Error("inventory has duplicate values");
  for (std::size_t n = 0; n < records.size(); ++n) {
    const auto& r = records[n];
    if (!seen.contains(r.label)) throw Error("label '" + r.label + "' not in inventory");
    if (r.embedding.size() != d) {
      throw Error("record " + std::to_string(n) + " has embedding length " +
                  std::to_string(r.embedding.size()) + ", expected " + std::to_string(d));
    }
  }
}

ProbeDataset ProbeDataset::empty_like() const {
  ProbeDataset out;
  out.language = language;
  out.category = category;
  out.model_id = model_id;
  out.layer = layer;
  out.d = d;
  out.inventory = inventory;
  return out;
}

const ProbeDataset& SplitDataset::part(SplitPart p) const {
  switch (p) {
    case SplitPart::train: return train;
    case SplitPart::dev: return dev;
    case SplitPart::test: return test;
  }
  return train;
}

ProbeDataset& SplitDataset::part(SplitPart p) {
  return const_cast<ProbeDataset&>(std::as_const(*this).part(p));
}

FilterMode parse_filter_mode(const std::string& text) {
  if (text == "value") return FilterMode::value;
  if (text == "lemma") return FilterMode::lemma;
  throw Error("unknown filter mode '" + text + "' (expected value|lemma)");
}

std::string to_string(FilterMode mode) { return mode == FilterMode::value ? "value" : "lemma"; }

SplitRatios parse_ratios(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw Error("");
    } catch (const std::exception&) {
      throw Error("invalid ratio '" + item + "'");
    }
  }
  if (parts.size() != 3) throw Error("expected three comma-separated ratios, got '" + text + "'");
  return {parts[0], parts[1], parts[2]};
}

fs::path blob_path_for(const fs::path& manifest_path) {
  fs::path blob = manifest_path;
  blob.replace_extension(".bin");
  return blob;
}

ProbeDataset load_dataset(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open dataset manifest " + manifest_path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed dataset manifest " + manifest_path.string() + ": " + e.what());
  }

  ProbeDataset ds;
  std::int64_t d = 0;
  std::size_t n = 0;
  std::vector<std::string> inventory;
  try {
    ds.language = doc.at("language").get<std::string>();
    ds.category = doc.at("category").get<std::string>();
    ds.model_id = doc.at("model_id").get<std::string>();
    ds.layer = doc.at("layer").get<int>();
    d = doc.at("d").get<std::int64_t>();
    n = doc.at("n").get<std::size_t>();
    inventory = doc.at("inventory").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error("dataset manifest " + manifest_path.string() + ": " + e.what());
  }
  if (d <= 0) throw Error("dataset manifest declares d = " + std::to_string(d) + " (must be > 0)");
  ds.d = static_cast<std::size_t>(d);
  std::sort(inventory.begin(), inventory.end());
  ds.inventory = std::move(inventory);

  const auto& recs = doc.at("records");
  if (!recs.is_array() || recs.size() != n) {
    throw Error("dataset manifest declares n = " + std::to_string(n) + " but lists " +
                std::to_string(recs.is_array() ? recs.size() : 0) + " records");
  }

  fs::path blob = blob_path_for(manifest_path);
  if (doc.contains("blob")) blob = manifest_path.parent_path() / doc.at("blob").get<std::string>();
  if (!fs::exists(blob)) throw Error("missing embedding blob " + blob.string());
  const auto expected = static_cast<std::uintmax_t>(n) * ds.d * 4;
  const auto actual = fs::file_size(blob);
  if (actual != expected) {
    throw Error("blob size mismatch: " + blob.string() + " has " + std::to_string(actual) +
                " bytes, expected " + std::to_string(expected));
  }

  std::ifstream bin(blob, std::ios::binary);
  std::vector<unsigned char> row(ds.d * 4);
  ds.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = recs[i];
    TokenRecord rec;
    try {
      rec.lemma = r.at("lemma").get<std::string>();
      rec.label = r.at("label").get<std::string>();
      rec.sentence_id = r.at("sentence_id").get<std::string>();
      rec.token_index = r.at("token_index").get<std::uint64_t>();
    } catch (const json::exception& e) {
      throw Error("record " + std::to_string(i) + ": " + e.what());
    }
    bin.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!bin) throw Error("short read from " + blob.string());
    rec.embedding.resize(ds.d);
    for (std::size_t j = 0; j < ds.d; ++j) rec.embedding[j] = float_from_le(&row[4 * j]);
    ds.records.push_back(std::move(rec));
  }
  ds.validate();
  return ds;
}

void save_dataset(const ProbeDataset& ds, const fs::path& manifest_path) {
  ds.validate();
  json records = json::array();
  for (const auto& r : ds.records) {
    records.push_back({{"lemma", r.lemma},
                       {"label", r.label},
                       {"sentence_id", r.sentence_id},
                       {"token_index", r.token_index}});
  }
  const fs::path blob = blob_path_for(manifest_path);
  json doc = {{"language", ds.language},   {"category", ds.category},
              {"model_id", ds.model_id},   {"layer", ds.layer},
              {"d", ds.d},                 {"n", ds.records.size()},
              {"inventory", ds.inventory}, {"blob", blob.filename().string()},
              {"records", std::move(records)}};
  if (manifest_path.has_parent_path()) fs::create_directories(manifest_path.parent_path());
  {
    std::ofstream out(manifest_path);
    if (!out) throw Error("cannot write " + manifest_path.string());
    out << doc.dump(1) << '\n';
  }
  std::ofstream bin(blob, std::ios::binary);
  if (!bin) throw Error("cannot write " + blob.string());
  std::vector<unsigned char> row(ds.d * 4);
  for (const auto& r : ds.records) {
    for (std::size_t j = 0; j < ds.d; ++j) float_to_le(r.embedding[j], &row[4 * j]);
    bin.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!bin) throw Error("write failed for " + blob.string());
}

SplitDataset lemma_split(const ProbeDataset& ds, const SplitRatios& ratios, std::uint64_t seed) {
  const auto r = ratios.as_array();
  for (double x : r) {
    if (!(x >= 0.0)) throw Error("split ratios must be non-negative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
  if (ds.empty()) throw Error("cannot split an empty dataset");

  // Lemmata in order of first appearance, with their token counts.
  std::unordered_map<std::string, std::size_t> lemma_id;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> record_lemma(ds.size());
  for (std::size_t n = 0; n < ds.size(); ++n) {
    auto [it, inserted] = lemma_id.emplace(ds.records[n].lemma, counts.size());
    if (inserted) counts.push_back(0);
    ++counts[it->second];
    record_lemma[n] = it->second;
  }

  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

  const auto total = static_cast<double>(ds.size());
  std::array<double, 3> filled{0.0, 0.0, 0.0};
  std::vector<int> lemma_split_of(counts.size(), 0);
  for (std::size_t id : order) {
    int best = 0;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 3; ++s) {
      const double deficit = r[s] * total - filled[s];
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = s;
      }
    }
    lemma_split_of[id] = best;
    filled[best] += static_cast<double>(counts[id]);
  }

  SplitDataset out;
  out.split_seed = seed;
  out.ratios = ratios;
  out.train = ds.empty_like();
  out.dev = ds.empty_like();
  out.test = ds.empty_like();
  for (std::size_t n = 0; n < ds.size(); ++n) {
    out.part(static_cast<SplitPart>(lemma_split_of[record_lemma[n]])).records.push_back(ds.records[n]);
  }
  return out;
}

SplitDataset filter_min_count(const SplitDataset& sd, int min_count, FilterMode mode) {
  if (min_count < 1) throw Error("min_count must be >= 1");
  const auto threshold = static_cast<std::size_t>(min_count);
  constexpr std::array parts{SplitPart::train, SplitPart::dev, SplitPart::test};

  SplitDataset out = sd;
  if (mode == FilterMode::lemma) {
    for (auto p : parts) {
      auto& split = out.part(p);
      std::unordered_map<std::string, std::size_t> per_lemma;
      for (const auto& rec : split.records) ++per_lemma[rec.lemma];
      std::erase_if(split.records,
                    [&](const TokenRecord& rec) { return per_lemma[rec.lemma] < threshold; });
    }
  }

  // Values that survive (value mode) or are still present (lemma mode) in every split.
  std::set<std::string> keep(sd.train.inventory.begin(), sd.train.inventory.end());
  for (auto p : parts) {
    const auto counts = value_inventory(out.part(p));
    std::set<std::string> surviving;
    for (const auto& [value, count] : counts) {
      if (mode == FilterMode::lemma ? count > 0 : count >= threshold) surviving.insert(value);
    }
    std::set<std::string> next;
    std::set_intersection(keep.begin(), keep.end(), surviving.begin(), surviving.end(),
                          std::inserter(next, next.begin()));
    keep = std::move(next);
  }
  if (keep.size() < 2) throw Error("category degenerate after filtering");

  std::vector<std::string> inventory(keep.begin(), keep.end());
  for (auto p : parts) {
    auto& split = out.part(p);
    std::erase_if(split.records, [&](const TokenRecord& rec) { return !keep.contains(rec.label); });
    split.inventory = inventory;
  }
  return out;
}

SplitDataset preprocess(const ProbeDataset& ds, const PreprocessConfig& cfg) {
  return filter_min_count(lemma_split(ds, cfg.ratios, cfg.seed), cfg.min_count, cfg.filter_mode);
}

std::map<std::string, std::size_t> value_inventory(const ProbeDataset& ds) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : ds.records) ++counts[r.label];
  return counts;
}

}  // namespace neuroprobe
