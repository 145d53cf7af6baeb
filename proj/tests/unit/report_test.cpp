#include <gtest/gtest.h>

#include <regex>

#include "fixtures.hpp"
#include "neuroprobe/metadata.hpp"
#include "neuroprobe/report.hpp"
#include "neuroprobe/serialize.hpp"

namespace np = neuroprobe;

namespace {

np::CategoryOverlapMatrix square(std::size_t L, bool all_significant) {
  np::CategoryOverlapMatrix m;
  m.model_id = "xlmr-base";
  m.category = "Number";
  for (std::size_t l = 0; l < L; ++l) m.languages.push_back("l" + std::to_string(l));
  m.k = 50;
  m.d = 768;
  m.overlap.assign(L * L, 0);
  m.overlap_pct.assign(L * L, 0.0);
  m.p_values.assign(L * L, 0.0);
  m.significant.assign(L * L, 0);
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      const std::size_t ov = i == j ? 50 : 5 + i + j;
      m.overlap[m.at(i, j)] = ov;
      m.overlap_pct[m.at(i, j)] = 2.0 * static_cast<double>(ov);
      m.p_values[m.at(i, j)] = i == j ? 0.0 : 1e-5;
      m.significant[m.at(i, j)] = (i != j && all_significant) ? 1 : 0;
    }
  }
  return m;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Heatmap, TwoByTwoStructure) {
  const auto svg = np::render_heatmap_svg(square(2, false));
  EXPECT_EQ(count(svg, "class=\"cell\""), 4u);
  EXPECT_EQ(count(svg, "class=\"label\""), 4u);
  EXPECT_EQ(count(svg, "class=\"significant\""), 0u);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Heatmap, FullySignificantOutlinesEveryOffDiagonalCell) {
  for (std::size_t L : {2u, 3u, 5u}) {
    const auto svg = np::render_heatmap_svg(square(L, true));
    EXPECT_EQ(count(svg, "class=\"significant\""), L * (L - 1));
    EXPECT_EQ(count(svg, "stroke=\"#ff7f0e\""), L * (L - 1));
  }
}

TEST(Heatmap, Deterministic) {
  fixture::TempDir dir("svg");
  const auto m = square(4, true);
  np::emit_heatmap(m, dir / "a.svg");
  np::emit_heatmap(m, dir / "b.svg");
  EXPECT_EQ(np::read_text_file(dir / "a.svg"), np::read_text_file(dir / "b.svg"));
}

TEST(Heatmap, EscapesLabels) {
  auto m = square(2, false);
  m.languages = {"a<b", "c&d"};
  const auto svg = np::render_heatmap_svg(m);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_NE(svg.find("c&amp;d"), std::string::npos);
}

TEST(Tables, ZeroCategoriesGiveHeadersOnly) {
  fixture::TempDir dir("tables");
  const auto files = np::emit_tables({}, dir.path());
  EXPECT_EQ(files.size(), 6u);
  for (const auto& f : files) {
    const auto t = np::read_csv(f);
    EXPECT_FALSE(t.header.empty());
    EXPECT_TRUE(t.rows.empty()) << f;
  }
}

TEST(Tables, ProportionTableCarriesPairTotals) {
  fixture::TempDir dir("tables");
  auto a = square(4, true);
  auto b = square(3, false);
  b.category = "Gender";
  const auto bundle = np::run_analyses({a, b}, {}, {});
  np::emit_tables(bundle, dir.path());
  const auto t = np::read_csv(dir / "proportions_xlmr-base.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"category", "significant", "total", "proportion"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"Number", "6", "6", "1"}));
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"Gender", "0", "3", "0"}));
}

TEST(Tables, RoundTripMatchesInMemoryValues) {
  fixture::TempDir dir("tables");
  np::MetadataTable meta;
  meta.add({"l0", "G", "F", 1.5, {}});
  meta.add({"l1", "G", "F", 3.0, {}});
  meta.add({"l2", "H", "F", 0.3, {}});
  meta.set_similarity("l0", "l1", 0.7);
  meta.set_similarity("l0", "l2", 0.1);
  meta.set_similarity("l1", "l2", 1.0 / 3.0);
  auto m = square(3, false);
  m.overlap_pct[m.at(0, 1)] = m.overlap_pct[m.at(1, 0)] = 100.0 / 3.0;
  const auto bundle = np::run_analyses({m}, meta, {{{"l0", "Number"}, 2}, {{"l1", "Number"}, 3}, {{"l2", "Number"}, 4}});
  np::emit_tables(bundle, dir.path());

  const auto dist = np::read_csv(dir / "distributions.csv");
  const auto pct = dist.column("overlap_pct");
  const auto pairs = m.pairs();
  ASSERT_EQ(dist.rows.size(), pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    EXPECT_EQ(std::stod(dist.rows[t][pct]), m.overlap_pct[m.at(pairs[t].first, pairs[t].second)]);
  }

  const auto corr = np::read_csv(dir / "correlations.csv");
  const auto rho = corr.column("rho");
  ASSERT_EQ(corr.rows.size(), bundle.correlations.size());
  for (std::size_t r = 0; r < corr.rows.size(); ++r) {
    if (bundle.correlations[r].rho) {
      EXPECT_EQ(std::stod(corr.rows[r][rho]), *bundle.correlations[r].rho);
    } else {
      EXPECT_TRUE(corr.rows[r][rho].empty());
    }
  }

  const auto summary = np::read_csv(dir / "distribution_summary.csv");
  EXPECT_EQ(std::stod(summary.rows[0][summary.column("mean")]), bundle.distributions[0].mean);
  const auto genus = np::read_csv(dir / "genus_contrast.csv");
  EXPECT_EQ(std::stod(genus.rows[0][genus.column("within_mean")]), *bundle.contrasts[0].within_mean);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -0.0, 2.5}) {
    EXPECT_EQ(std::stod(np::format_double(v)), v);
  }
  EXPECT_EQ(np::format_double(0.25), "0.25");
  EXPECT_EQ(np::format_double(3.0), "3");
}

TEST(Csv, SkipsCommentsAndBlankLines) {
  const auto t = np::parse_csv("# note\na,b\n\n1,2\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][t.column("b")], "2");
}
