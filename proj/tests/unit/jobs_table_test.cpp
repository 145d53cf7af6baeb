#include <gtest/gtest.h>

#include <map>
#include <set>

#include "neuroprobe/jobs_table.hpp"

namespace np = neuroprobe;

namespace {

std::map<std::string, std::size_t> languages_per_category() {
  std::map<std::string, std::size_t> out;
  for (const auto& l : np::reference_languages()) {
    for (auto c : l.categories) ++out[std::string(c)];
  }
  return out;
}

}  // namespace

TEST(ReferenceTable, CodesAreUniqueAndCategoriesDistinct) {
  std::set<std::string_view> codes;
  for (const auto& l : np::reference_languages()) {
    EXPECT_TRUE(codes.insert(l.code).second) << l.code;
    std::set<std::string_view> cats(l.categories.begin(), l.categories.end());
    EXPECT_EQ(cats.size(), l.categories.size()) << l.code;
  }
  EXPECT_EQ(codes.size(), 42u);
}

TEST(ReferenceTable, PartOfSpeechCoversAllLanguages) {
  // 42 languages give the 861 comparisons reported for POS.
  const auto pos = np::reference_languages_for("Part of Speech");
  EXPECT_EQ(pos.size(), 42u);
  EXPECT_EQ(pos.size() * (pos.size() - 1) / 2, 861u);
}

TEST(ReferenceTable, ListedPairsBoundReportedTotals) {
  // Reported totals count the languages that survived filtering, so the
  // listed languages can only give as many pairs or more.
  const std::map<std::string, std::size_t> reported{
      {"Definiteness", 45}, {"Comparison", 10}, {"Possession", 1}, {"Aspect", 153}, {"Polarity", 3},
      {"Number", 666},      {"Animacy", 28},    {"Mood", 105},     {"Gender", 378}, {"Person", 276},
      {"Part of Speech", 861}, {"Case", 300},   {"Tense", 325},    {"Finiteness", 45}};
  const auto listed = languages_per_category();
  for (const auto& [cat, total] : reported) {
    const std::size_t L = listed.at(cat);
    EXPECT_GE(L * (L - 1) / 2, total) << cat;
  }
}

TEST(ReferenceTable, SpotChecks) {
  for (const auto& l : np::reference_languages()) {
    if (l.code == "rus") {
      EXPECT_EQ(l.family, "Indo-European");
      EXPECT_EQ(l.categories.size(), 11u);
    }
    if (l.code == "eus") EXPECT_EQ(l.family, "Language isolate");
  }
  const auto comparison = np::reference_languages_for("Comparison");
  EXPECT_EQ(comparison.size(), 19u);
}

TEST(CategorySlug, Names) {
  EXPECT_EQ(np::category_slug("Part of Speech"), "POS");
  EXPECT_EQ(np::category_slug("Argument Marking"), "ArgumentMarking");
  EXPECT_EQ(np::category_slug("Gender"), "Gender");
}
