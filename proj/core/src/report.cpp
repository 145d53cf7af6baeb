#include "neuroprobe/report.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "neuroprobe/error.hpp"
#include "neuroprobe/serialize.hpp"

namespace neuroprobe {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Viridis control points; lightness increases monotonically along the ramp.
constexpr std::array<std::array<int, 3>, 9> kRamp{{{68, 1, 84},
                                                   {71, 44, 122},
                                                   {59, 81, 139},
                                                   {44, 113, 142},
                                                   {33, 144, 141},
                                                   {39, 173, 129},
                                                   {92, 200, 99},
                                                   {170, 220, 50},
                                                   {253, 231, 37}}};

std::string ramp_color(double pct) {
  const double t = std::clamp(pct / 100.0, 0.0, 1.0) * static_cast<double>(kRamp.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(t));
  const std::size_t hi = std::min(lo + 1, kRamp.size() - 1);
  const double f = t - static_cast<double>(lo);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(kRamp[lo][c] + f * (kRamp[hi][c] - kRamp[lo][c])));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string file_token(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf.data(), ptr);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error("CSV is missing column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                  " fields, expected " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw Error("CSV has no header");
  return table;
}

CsvTable read_csv(const fs::path& path) { return parse_csv(read_text_file(path)); }

AnalysisBundle run_analyses(std::vector<CategoryOverlapMatrix> matrices, const MetadataTable& metadata,
                            const InventorySizes& inventories) {
  AnalysisBundle b;
  b.matrices = std::move(matrices);
  for (const auto& m : b.matrices) b.proportions.push_back(significant_proportion(m));
  b.distributions = overlap_distribution(b.matrices);
  b.contrasts = genus_contrast(b.matrices, metadata);
  auto values = correlate_num_values(b.matrices, inventories);
  b.correlations.insert(b.correlations.end(), values.begin(), values.end());
  auto typ = correlate_typology(b.matrices, metadata);
  b.correlations.insert(b.correlations.end(), typ.begin(), typ.end());
  auto size = correlate_data_size(b.matrices, metadata);
  b.correlations.insert(b.correlations.end(), size.begin(), size.end());
  return b;
}

std::string render_heatmap_svg(const CategoryOverlapMatrix& matrix) {
  constexpr int kCell = 36;
  constexpr int kMargin = 72;
  constexpr int kTop = 96;
  const int L = static_cast<int>(matrix.size());
  const int width = kMargin + L * kCell + 16;
  const int height = kTop + L * kCell + 16;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<title>" << xml_escape(matrix.model_id + " " + matrix.category) << " top-" << matrix.k
      << " overlap (%)</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

  for (int i = 0; i < L; ++i) {
    const std::string name = xml_escape(matrix.languages[static_cast<std::size_t>(i)]);
    svg << "<text class=\"label\" x=\"" << kMargin - 6 << "\" y=\"" << kTop + i * kCell + kCell / 2 + 4
        << "\" text-anchor=\"end\">" << name << "</text>\n";
    const int cx = kMargin + i * kCell + kCell / 2;
    svg << "<text class=\"label\" x=\"" << cx << "\" y=\"" << kTop - 6 << "\" text-anchor=\"start\" transform=\"rotate(-60 "
        << cx << ' ' << kTop - 6 << ")\">" << name << "</text>\n";
  }
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      const auto idx = matrix.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const double pct = matrix.overlap_pct[idx];
      const int x = kMargin + j * kCell;
      const int y = kTop + i * kCell;
      svg << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
          << kCell << "\" fill=\"" << ramp_color(pct) << "\"/>\n";
      svg << "<text class=\"value\" x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
          << "\" text-anchor=\"middle\" fill=\"" << (pct > 60.0 ? "#000000" : "#ffffff") << "\">"
          << std::lround(pct) << "</text>\n";
    }
  }
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      if (i == j) continue;
      if (!matrix.significant[matrix.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j))]) continue;
      svg << "<rect class=\"significant\" x=\"" << kMargin + j * kCell + 2 << "\" y=\"" << kTop + i * kCell + 2
          << "\" width=\"" << kCell - 4 << "\" height=\"" << kCell - 4
          << "\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"3\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_heatmap(const CategoryOverlapMatrix& matrix, const fs::path& path) {
  write_text_file(path, render_heatmap_svg(matrix));
}

std::vector<fs::path> emit_tables(const AnalysisBundle& bundle, const fs::path& dir) {
  std::vector<fs::path> written;
  auto emit = [&](const fs::path& path, const std::string& text) {
    write_text_file(path, text);
    written.push_back(path);
  };

  std::ostringstream all;
  all << "model_id,category,significant,total,proportion\n";
  std::map<std::string, std::ostringstream> per_model;
  for (const auto& p : bundle.proportions) {
    all << p.model_id << ',' << p.category << ',' << p.significant << ',' << p.total << ','
        << format_double(p.proportion) << '\n';
    auto& out = per_model[p.model_id];
    if (out.tellp() == 0) out << "category,significant,total,proportion\n";
    out << p.category << ',' << p.significant << ',' << p.total << ',' << format_double(p.proportion) << '\n';
  }
  emit(dir / "proportions.csv", all.str());
  for (const auto& [model, out] : per_model) emit(dir / ("proportions_" + file_token(model) + ".csv"), out.str());

  std::ostringstream dist;
  dist << "model_id,category,lang_a,lang_b,overlap_pct\n";
  for (const auto& m : bundle.matrices) {
    for (auto [i, j] : m.pairs()) {
      dist << m.model_id << ',' << m.category << ',' << m.languages[i] << ',' << m.languages[j] << ','
           << format_double(m.overlap_pct[m.at(i, j)]) << '\n';
    }
  }
  emit(dir / "distributions.csv", dist.str());

  std::ostringstream summary;
  summary << "model_id,category,pairs,mean,median\n";
  for (const auto& d : bundle.distributions) {
    summary << d.model_id << ',' << d.category << ',' << d.values.size() << ',' << format_double(d.mean) << ','
            << format_double(d.median) << '\n';
  }
  emit(dir / "distribution_summary.csv", summary.str());

  std::ostringstream genus;
  genus << "model_id,category,within_mean,cross_mean,within_pairs,cross_pairs,excluded_pairs\n";
  for (const auto& g : bundle.contrasts) {
    genus << g.model_id << ',' << g.category << ',' << opt(g.within_mean) << ',' << opt(g.cross_mean) << ','
          << g.within_pairs << ',' << g.cross_pairs << ',' << g.excluded_pairs << '\n';
  }
  emit(dir / "genus_contrast.csv", genus.str());

  std::ostringstream corr, points;
  corr << "analysis,model_id,category,n,rho,dropped,note\n";
  points << "analysis,model_id,category,label,x,y\n";
  for (const auto& c : bundle.correlations) {
    corr << c.analysis << ',' << c.model_id << ',' << c.category << ',' << c.x.size() << ',' << opt(c.rho)
         << ',' << c.dropped << ',' << c.note << '\n';
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      points << c.analysis << ',' << c.model_id << ',' << c.category << ',' << c.labels[i] << ','
             << format_double(c.x[i]) << ',' << format_double(c.y[i]) << '\n';
    }
  }
  emit(dir / "correlations.csv", corr.str());
  emit(dir / "correlation_points.csv", points.str());
  return written;
}

}  // namespace neuroprobe
