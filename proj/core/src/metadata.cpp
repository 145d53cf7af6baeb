#include "neuroprobe/metadata.hpp"

#include <algorithm>
#include <cmath>

#include "neuroprobe/error.hpp"
#include "neuroprobe/report.hpp"

namespace neuroprobe {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw Error("");
    return v;
  } catch (const std::exception&) {
    throw Error("invalid " + what + " '" + text + "'");
  }
}

}  // namespace

LanguageMetadata& MetadataTable::ensure(const std::string& language) {
  auto it = index_.find(language);
  if (it != index_.end()) return entries_[it->second];
  index_.emplace(language, entries_.size());
  entries_.push_back(LanguageMetadata{language, "", "", std::nullopt, {}});
  return entries_.back();
}

void MetadataTable::add(LanguageMetadata entry) {
  if (index_.contains(entry.language)) throw Error("duplicate metadata for language " + entry.language);
  if (entry.pretrain_size_gib && !(*entry.pretrain_size_gib > 0.0)) {
    throw Error("pre-training size of " + entry.language + " must be positive");
  }
  const std::string code = entry.language;
  auto similarities = std::move(entry.typological_similarity);
  entry.typological_similarity.clear();
  index_.emplace(code, entries_.size());
  entries_.push_back(std::move(entry));
  for (const auto& [other, value] : similarities) set_similarity(code, other, value);
}

void MetadataTable::set_similarity(const std::string& a, const std::string& b, double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw Error("similarity of " + a + "/" + b + " outside [0, 1]");
  if (a == b && value != 1.0) throw Error("self-similarity of " + a + " must be 1");
  auto record = [&](const std::string& from, const std::string& to) {
    auto& map = ensure(from).typological_similarity;
    auto [it, inserted] = map.emplace(to, value);
    if (!inserted && it->second != value) {
      throw Error("asymmetric similarity for " + a + "/" + b);
    }
  };
  record(a, b);
  record(b, a);
}

const LanguageMetadata* MetadataTable::find(const std::string& language) const {
  auto it = index_.find(language);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::optional<double> MetadataTable::similarity(const std::string& a, const std::string& b) const {
  const auto* entry = find(a);
  if (!entry) return std::nullopt;
  auto it = entry->typological_similarity.find(b);
  if (it == entry->typological_similarity.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> MetadataTable::order(std::vector<std::string> languages) const {
  std::stable_sort(languages.begin(), languages.end(), [&](const std::string& a, const std::string& b) {
    auto ia = index_.find(a);
    auto ib = index_.find(b);
    const bool ka = ia != index_.end();
    const bool kb = ib != index_.end();
    if (ka && kb) return ia->second < ib->second;
    if (ka != kb) return ka;
    return a < b;
  });
  return languages;
}

MetadataTable load_metadata_csv(const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  const std::size_t c_lang = csv.column("language");
  const std::size_t c_genus = csv.column("genus");
  const std::size_t c_family = csv.column("family");
  const std::size_t c_size = csv.column("pretrain_size_gib");
  MetadataTable table;
  for (const auto& row : csv.rows) {
    LanguageMetadata entry;
    entry.language = row[c_lang];
    entry.genus = row[c_genus];
    entry.family = row[c_family];
    if (!row[c_size].empty()) entry.pretrain_size_gib = parse_number(row[c_size], "pre-training size");
    table.add(std::move(entry));
  }
  return table;
}

void load_similarity_csv(const std::filesystem::path& path, MetadataTable& table) {
  const CsvTable csv = read_csv(path);
  const std::size_t c_a = csv.column("lang_a");
  const std::size_t c_b = csv.column("lang_b");
  const std::size_t c_s = csv.column("similarity");
  for (const auto& row : csv.rows) {
    table.set_similarity(row[c_a], row[c_b], parse_number(row[c_s], "similarity"));
  }
}

}  // namespace neuroprobe
