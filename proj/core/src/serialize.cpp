#include "neuroprobe/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "neuroprobe/error.hpp"

namespace neuroprobe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_file(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

json to_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"batch_size", c.batch_size},
          {"max_epochs", c.max_epochs},       {"patience", c.patience},
          {"mc_samples", c.mc_samples},       {"seed", c.seed},
          {"baseline_decay", c.baseline_decay}};
}

TrainConfig train_config_from(const json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.max_epochs = j.at("max_epochs").get<int>();
  c.patience = j.at("patience").get<int>();
  c.mc_samples = j.at("mc_samples").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.baseline_decay = j.at("baseline_decay").get<double>();
  return c;
}

json to_json(const PreprocessConfig& p) {
  return {{"ratios", {p.ratios.train, p.ratios.dev, p.ratios.test}},
          {"seed", p.seed},
          {"min_count", p.min_count},
          {"filter_mode", to_string(p.filter_mode)}};
}

PreprocessConfig preprocess_from(const json& j) {
  PreprocessConfig p;
  const auto r = j.at("ratios").get<std::vector<double>>();
  if (r.size() != 3) throw Error("split ratios must have three entries");
  p.ratios = {r[0], r[1], r[2]};
  p.seed = j.at("seed").get<std::uint64_t>();
  p.min_count = j.at("min_count").get<int>();
  p.filter_mode = parse_filter_mode(j.at("filter_mode").get<std::string>());
  return p;
}

}  // namespace

void write_text_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw Error("write failed for " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_probe_file(const ProbeFile& f, const fs::path& path) {
  json trace = json::array();
  for (const auto& e : f.trace) {
    trace.push_back({{"epoch", e.epoch}, {"train_elbo", e.train_elbo}, {"dev_elbo", e.dev_elbo}});
  }
  json train_config = to_json(f.train_config);
  train_config["preprocess"] = to_json(f.preprocess);
  json doc = {{"language", f.language},
              {"category", f.category},
              {"model_id", f.model_id},
              {"inventory_order", f.probe.inventory_order},
              {"d", f.probe.d},
              {"weights", f.probe.weights},
              {"bias", f.probe.bias},
              {"phi_logits", f.sampler.logits},
              {"train_config", std::move(train_config)},
              {"best_dev_elbo", f.best_dev_elbo},
              {"best_epoch", f.best_epoch},
              {"trace", std::move(trace)}};
  write_text_file(path, doc.dump(1) + "\n");
}

ProbeFile load_probe_file(const fs::path& path) {
  const json doc = parse_file(path);
  ProbeFile f;
  try {
    f.language = doc.value("language", "");
    f.category = doc.value("category", "");
    f.model_id = doc.value("model_id", "");
    f.probe.inventory_order = doc.at("inventory_order").get<std::vector<std::string>>();
    f.probe.d = doc.at("d").get<std::size_t>();
    f.probe.weights = doc.at("weights").get<std::vector<double>>();
    f.probe.bias = doc.at("bias").get<std::vector<double>>();
    f.sampler.logits = doc.at("phi_logits").get<std::vector<double>>();
    const auto& tc = doc.at("train_config");
    f.train_config = train_config_from(tc);
    if (tc.contains("preprocess")) f.preprocess = preprocess_from(tc.at("preprocess"));
    f.best_dev_elbo = doc.at("best_dev_elbo").get<double>();
    f.best_epoch = doc.value("best_epoch", 0);
    if (doc.contains("trace")) {
      for (const auto& e : doc.at("trace")) {
        f.trace.push_back({e.at("epoch").get<int>(), e.at("train_elbo").get<double>(),
                           e.at("dev_elbo").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw Error("probe file " + path.string() + ": " + e.what());
  }
  f.probe.validate();
  if (f.sampler.d() != f.probe.d) throw Error("probe file " + path.string() + ": phi_logits length != d");
  return f;
}

void save_neurons_file(const NeuronsFile& f, const fs::path& path) {
  json doc = {{"language", f.language}, {"category", f.category},      {"model_id", f.model_id},
              {"d", f.subset.d},        {"k", f.subset.k()},           {"dims", f.subset.dims},
              {"trace", f.subset.selection_trace}};
  write_text_file(path, doc.dump(1) + "\n");
}

NeuronsFile load_neurons_file(const fs::path& path) {
  const json doc = parse_file(path);
  NeuronsFile f;
  try {
    f.language = doc.at("language").get<std::string>();
    f.category = doc.at("category").get<std::string>();
    f.model_id = doc.at("model_id").get<std::string>();
    f.subset.d = doc.at("d").get<std::size_t>();
    f.subset.dims = doc.at("dims").get<std::vector<std::size_t>>();
    f.subset.selection_trace = doc.value("trace", std::vector<double>{});
    if (doc.at("k").get<std::size_t>() != f.subset.dims.size()) throw Error("k does not match dims");
  } catch (const json::exception& e) {
    throw Error("neurons file " + path.string() + ": " + e.what());
  }
  f.subset.validate();
  return f;
}

void save_matrix_file(const CategoryOverlapMatrix& m, const fs::path& path) {
  json doc = {{"model_id", m.model_id},       {"category", m.category},
              {"languages", m.languages},     {"k", m.k},
              {"d", m.d},                     {"overlap", m.overlap},
              {"overlap_pct", m.overlap_pct}, {"p_values", m.p_values},
              {"significant", m.significant}};
  write_text_file(path, doc.dump(1) + "\n");
}

CategoryOverlapMatrix load_matrix_file(const fs::path& path) {
  const json doc = parse_file(path);
  CategoryOverlapMatrix m;
  try {
    m.model_id = doc.at("model_id").get<std::string>();
    m.category = doc.at("category").get<std::string>();
    m.languages = doc.at("languages").get<std::vector<std::string>>();
    m.k = doc.at("k").get<std::size_t>();
    m.d = doc.at("d").get<std::size_t>();
    m.overlap = doc.at("overlap").get<std::vector<std::size_t>>();
    m.overlap_pct = doc.at("overlap_pct").get<std::vector<double>>();
    m.p_values = doc.at("p_values").get<std::vector<double>>();
    m.significant = doc.at("significant").get<std::vector<std::uint8_t>>();
  } catch (const json::exception& e) {
    throw Error("matrix file " + path.string() + ": " + e.what());
  }
  const std::size_t cells = m.languages.size() * m.languages.size();
  if (m.overlap.size() != cells || m.overlap_pct.size() != cells || m.p_values.size() != cells ||
      m.significant.size() != cells) {
    throw Error("matrix file " + path.string() + ": matrix sizes do not match the language count");
  }
  return m;
}

}  // namespace neuroprobe
