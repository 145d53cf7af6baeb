#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "neuroprobe/analysis.hpp"

namespace neuroprobe {

/// Everything derived from the overlap matrices of one run.
struct AnalysisBundle {
  std::vector<CategoryOverlapMatrix> matrices;
  std::vector<SignificantProportion> proportions;
  std::vector<OverlapDistribution> distributions;
  std::vector<GenusContrast> contrasts;
  std::vector<CorrelationResult> correlations;
};

AnalysisBundle run_analyses(std::vector<CategoryOverlapMatrix> matrices,
                            const MetadataTable& metadata, const InventorySizes& inventories);

/// Heatmap of overlap_pct as a standalone SVG document. Significant
/// off-diagonal cells get an orange outline.
std::string render_heatmap_svg(const CategoryOverlapMatrix& matrix);
void emit_heatmap(const CategoryOverlapMatrix& matrix, const std::filesystem::path& path);

/// Writes the CSV tables of a bundle into `dir` and returns the paths written:
///   proportions.csv             model_id,category,significant,total,proportion
///   proportions_<model>.csv     category,significant,total,proportion
///   distributions.csv           model_id,category,lang_a,lang_b,overlap_pct
///   distribution_summary.csv    model_id,category,pairs,mean,median
///   genus_contrast.csv          model_id,category,within_mean,cross_mean,
///                               within_pairs,cross_pairs,excluded_pairs
///   correlations.csv            analysis,model_id,category,n,rho,dropped,note
///   correlation_points.csv      analysis,model_id,category,label,x,y
std::vector<std::filesystem::path> emit_tables(const AnalysisBundle& bundle,
                                               const std::filesystem::path& dir);

/// Minimal CSV reader for the files above (no quoting; comma separated).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace neuroprobe
