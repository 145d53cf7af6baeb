#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace neuroprobe {

struct LanguageMetadata {
  std::string language;
  std::string genus;
  std::string family;
  std::optional<double> pretrain_size_gib;
  std::map<std::string, double> typological_similarity;
};

/// Per-language covariates, kept in file order (which also fixes the
/// language order of overlap matrices).
class MetadataTable {
 public:
  void add(LanguageMetadata entry);
  /// Records similarity(a, b) in both directions. Throws if a previous value
  /// for the pair disagrees or a self-similarity is not 1.
  void set_similarity(const std::string& a, const std::string& b, double value);

  const LanguageMetadata* find(const std::string& language) const;
  std::optional<double> similarity(const std::string& a, const std::string& b) const;
  const std::vector<LanguageMetadata>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// `languages` reordered by their first appearance in the table; unknown
  /// languages follow in lexicographic order.
  std::vector<std::string> order(std::vector<std::string> languages) const;

 private:
  LanguageMetadata& ensure(const std::string& language);

  std::vector<LanguageMetadata> entries_;
  std::map<std::string, std::size_t> index_;
};

/// CSV with header `language,genus,family,pretrain_size_gib`; an empty size
/// field means unknown.
MetadataTable load_metadata_csv(const std::filesystem::path& path);
/// CSV with header `lang_a,lang_b,similarity`, merged into `table`.
void load_similarity_csv(const std::filesystem::path& path, MetadataTable& table);

}  // namespace neuroprobe
