#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "neuroprobe/error.hpp"
#include "neuroprobe/jobs_table.hpp"
#include "neuroprobe/pipeline.hpp"
#include "neuroprobe/report.hpp"
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

std::uint64_t to_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw Error("");
    const auto x = std::stoull(v, &used);
    if (used != v.size()) throw Error("");
    return x;
  } catch (const std::exception&) {
    throw Error("key '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw Error("");
    return x;
  } catch (const std::exception&) {
    throw Error("key '" + key + "' expects a number, got '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

SelectOn parse_select_on(const std::string& text) {
  if (text == "test") return SelectOn::test;
  if (text == "dev") return SelectOn::dev;
  throw Error("unknown selection split '" + text + "' (expected test|dev)");
}

std::string to_string(SelectOn value) { return value == SelectOn::test ? "test" : "dev"; }

CorrectionFamily parse_family(const std::string& text) {
  if (text == "category") return CorrectionFamily::category;
  if (text == "global") return CorrectionFamily::global;
  throw Error("unknown correction family '" + text + "' (expected category|global)");
}

std::string to_string(CorrectionFamily value) {
  return value == CorrectionFamily::category ? "category" : "global";
}

RunManifest parse_run_manifest_text(const std::string& text, const fs::path& base_dir,
                                    std::optional<std::uint64_t> seed_override) {
  RunManifest m;
  std::optional<std::string> jobs_table;
  std::vector<std::string> models;
  std::string dataset_template;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("run manifest line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "job") {
        std::istringstream fields(value);
        JobSpec job;
        std::string path;
        if (!(fields >> job.model_id >> job.language >> job.category >> path)) {
          throw Error("job expects '<model_id> <language> <category> <dataset manifest>'");
        }
        std::string extra;
        if (fields >> extra) throw Error("job has trailing fields");
        job.dataset = resolve(base_dir, path);
        m.jobs.push_back(std::move(job));
      } else if (key == "seed") {
        m.seed = to_u64(value, key);
      } else if (key == "k") {
        m.k = to_u64(value, key);
      } else if (key == "trials") {
        m.trials = to_u64(value, key);
      } else if (key == "alpha") {
        m.alpha = to_double(value, key);
      } else if (key == "pvalue") {
        m.pvalue = parse_pvalue_method(value);
      } else if (key == "family") {
        m.family = parse_family(value);
      } else if (key == "select_on") {
        m.select_on = parse_select_on(value);
      } else if (key == "output_dir") {
        m.output_dir = resolve(base_dir, value);
      } else if (key == "metadata") {
        m.metadata = resolve(base_dir, value);
      } else if (key == "similarity") {
        m.similarity = resolve(base_dir, value);
      } else if (key == "ratios") {
        m.preprocess.ratios = parse_ratios(value);
      } else if (key == "min_count") {
        m.preprocess.min_count = static_cast<int>(to_u64(value, key));
      } else if (key == "filter_mode") {
        m.preprocess.filter_mode = parse_filter_mode(value);
      } else if (key == "lr") {
        m.train.learning_rate = to_double(value, key);
      } else if (key == "batch") {
        m.train.batch_size = to_u64(value, key);
      } else if (key == "samples") {
        m.train.mc_samples = static_cast<int>(to_u64(value, key));
      } else if (key == "epochs") {
        m.train.max_epochs = static_cast<int>(to_u64(value, key));
      } else if (key == "patience") {
        m.train.patience = static_cast<int>(to_u64(value, key));
      } else if (key == "baseline_decay") {
        m.train.baseline_decay = to_double(value, key);
      } else if (key == "jobs_table") {
        if (value != "reference") throw Error("jobs_table supports only 'reference'");
        jobs_table = value;
      } else if (key == "models") {
        models = split_list(value);
      } else if (key == "dataset_template") {
        dataset_template = value;
      } else {
        throw Error("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error("run manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (jobs_table) {
    if (models.empty() || dataset_template.empty()) {
      throw Error("jobs_table = reference needs 'models' and 'dataset_template'");
    }
    for (const auto& model : models) {
      for (const auto& lang : reference_languages()) {
        for (auto category : lang.categories) {
          const std::string slug = category_slug(category);
          std::string path = replace_all(dataset_template, "{model}", model);
          path = replace_all(path, "{language}", std::string(lang.code));
          path = replace_all(path, "{category}", slug);
          m.jobs.push_back({model, std::string(lang.code), slug, resolve(base_dir, path)});
        }
      }
    }
  }
  if (seed_override) m.seed = *seed_override;
  m.output_dir = resolve(base_dir, m.output_dir.string());
  return m;
}

RunManifest parse_run_manifest(const fs::path& path) {
  std::optional<std::uint64_t> override_seed;
  if (const char* env = std::getenv("PROBE_SEED"); env && *env) {
    override_seed = to_u64(env, "PROBE_SEED");
  }
  return parse_run_manifest_text(read_text_file(path), path.parent_path(), override_seed);
}

std::vector<std::string> RunManifest::problems() const {
  std::vector<std::string> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& job : jobs) {
    if (!seen.emplace(job.model_id, job.language, job.category).second) {
      out.push_back("duplicate job " + job.model_id + "/" + job.language + "/" + job.category);
    }
    if (!fs::exists(job.dataset)) out.push_back("dataset manifest not found: " + job.dataset.string());
  }
  if (!metadata.empty() && !fs::exists(metadata)) out.push_back("metadata file not found: " + metadata.string());
  if (!similarity.empty() && !fs::exists(similarity)) {
    out.push_back("similarity file not found: " + similarity.string());
  }
  if (k == 0) out.push_back("k must be positive");
  if (trials == 0) out.push_back("trials must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) out.push_back("alpha must lie in (0, 1)");
  if (preprocess.min_count < 1) out.push_back("min_count must be >= 1");
  const auto r = preprocess.ratios.as_array();
  if (r[0] < 0 || r[1] < 0 || r[2] < 0 || std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    out.push_back("ratios must be non-negative and sum to 1");
  }
  try {
    train.validate();
  } catch (const Error& e) {
    out.push_back(e.what());
  }
  return out;
}

void RunManifest::validate() const {
  const auto p = problems();
  if (p.empty()) return;
  std::string msg = "invalid run manifest:";
  for (const auto& s : p) msg += "\n  " + s;
  throw Error(msg);
}

std::string format_run_manifest(const RunManifest& m) {
  std::ostringstream out;
  out << "seed = " << m.seed << '\n'
      << "k = " << m.k << '\n'
      << "trials = " << m.trials << '\n'
      << "alpha = " << format_double(m.alpha) << '\n'
      << "pvalue = " << to_string(m.pvalue) << '\n'
      << "family = " << to_string(m.family) << '\n'
      << "select_on = " << to_string(m.select_on) << '\n'
      << "ratios = " << format_double(m.preprocess.ratios.train) << ','
      << format_double(m.preprocess.ratios.dev) << ',' << format_double(m.preprocess.ratios.test) << '\n'
      << "min_count = " << m.preprocess.min_count << '\n'
      << "filter_mode = " << to_string(m.preprocess.filter_mode) << '\n'
      << "lr = " << format_double(m.train.learning_rate) << '\n'
      << "batch = " << m.train.batch_size << '\n'
      << "samples = " << m.train.mc_samples << '\n'
      << "epochs = " << m.train.max_epochs << '\n'
      << "patience = " << m.train.patience << '\n'
      << "baseline_decay = " << format_double(m.train.baseline_decay) << '\n'
      << "output_dir = " << m.output_dir.generic_string() << '\n';
  if (!m.metadata.empty()) out << "metadata = " << m.metadata.generic_string() << '\n';
  if (!m.similarity.empty()) out << "similarity = " << m.similarity.generic_string() << '\n';
  for (const auto& j : m.jobs) {
    out << "job = " << j.model_id << ' ' << j.language << ' ' << j.category << ' '
        << j.dataset.generic_string() << '\n';
  }
  return out.str();
}

}  // namespace neuroprobe
