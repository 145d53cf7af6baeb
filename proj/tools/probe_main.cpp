#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "neuroprobe/data.hpp"
#include "neuroprobe/error.hpp"
#include "neuroprobe/pipeline.hpp"
#include "neuroprobe/random.hpp"
#include "neuroprobe/report.hpp"
#include "neuroprobe/selection.hpp"
#include "neuroprobe/serialize.hpp"
#include "neuroprobe/stats.hpp"
#include "neuroprobe/synth.hpp"
#include "neuroprobe/train.hpp"

namespace fs = std::filesystem;
namespace np = neuroprobe;
using nlohmann::json;

namespace {

void print_outcomes(const np::RunSummary& summary) {
  for (const auto& j : summary.jobs) {
    std::cerr << np::to_string(j.state) << "  " << j.spec.model_id << ' ' << j.spec.language << ' '
              << j.spec.category;
    if (j.state == np::JobState::failed) std::cerr << ": " << j.error;
    std::cerr << '\n';
  }
  std::cerr << summary.jobs.size() << " jobs, " << summary.failed() << " failed, "
            << summary.matrices.size() << " matrices\n";
}

// Jobs that already have outputs on disk, as if a run had just completed them.
std::vector<np::JobOutcome> existing_outcomes(const np::RunManifest& m) {
  std::vector<np::JobOutcome> out;
  for (const auto& spec : m.jobs) {
    np::JobOutcome o;
    o.spec = spec;
    o.directory = np::job_directory(m, spec);
    o.probe_file = o.directory / "probe.json";
    o.neurons_file = o.directory / "neurons.json";
    if (fs::exists(o.probe_file) && fs::exists(o.neurons_file)) {
      o.state = np::JobState::cached;
    } else {
      o.error = "no outputs; run the job first";
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent-variable neuron probing and cross-lingual overlap analysis"};
  app.require_subcommand(1);

  std::string config;

  auto* validate = app.add_subcommand("validate", "Check a run manifest");
  validate->add_option("--config", config, "Run manifest")->required();

  unsigned workers = 1;
  auto* run = app.add_subcommand("run", "Run every job, then analyses and reports");
  run->add_option("--config", config, "Run manifest")->required();
  run->add_option("--jobs", workers, "Worker threads")->check(CLI::Range(1u, 1024u));

  auto* analyze = app.add_subcommand("analyze", "Rebuild matrices and tables from finished jobs");
  analyze->add_option("--config", config, "Run manifest")->required();

  auto* report = app.add_subcommand("report", "Render heatmaps and tables from saved matrices");
  report->add_option("--config", config, "Run manifest")->required();

  std::string dataset, out_path, ratios = "0.65,0.10,0.25", filter_mode = "value";
  np::TrainConfig tc;
  int min_count = 20;
  auto* train = app.add_subcommand("train", "Train one probe");
  train->add_option("--dataset", dataset, "Dataset manifest")->required();
  train->add_option("--out", out_path, "Probe file to write")->required();
  train->add_option("--lr", tc.learning_rate, "Adam step size")->capture_default_str();
  train->add_option("--batch", tc.batch_size, "Tokens per mini-batch")->capture_default_str();
  train->add_option("--samples", tc.mc_samples, "Subset samples per token")->capture_default_str();
  train->add_option("--seed", tc.seed, "Seed for split and training")->capture_default_str();
  train->add_option("--epochs", tc.max_epochs, "Maximum epochs")->capture_default_str();
  train->add_option("--patience", tc.patience, "Early-stopping patience")->capture_default_str();
  train->add_option("--ratios", ratios, "train,dev,test fractions")->capture_default_str();
  train->add_option("--min-count", min_count, "Minimum tokens per value and split")->capture_default_str();
  train->add_option("--filter-mode", filter_mode, "value|lemma")->capture_default_str();

  std::string probe_path, select_on = "test", dump_path;
  std::size_t k = np::kDefaultTopK;
  auto* select = app.add_subcommand("select", "Greedy top-k neuron selection");
  select->add_option("--probe", probe_path, "Probe file")->required();
  select->add_option("--dataset", dataset, "Dataset manifest the probe was trained on")->required();
  select->add_option("--k", k, "Neurons to select")->capture_default_str();
  select->add_option("--out", out_path, "Neurons file to write")->required();
  select->add_option("--select-on", select_on, "test|dev")->capture_default_str();
  select->add_option("--dump", dump_path, "CSV of every candidate score per step");

  auto* stats = app.add_subcommand("stats", "Overlap test and multiple-comparison correction");
  stats->require_subcommand(1);
  std::string a_path, b_path, pvalue = "permutation", pvalues_path;
  std::uint64_t trials = 100000, seed = 13;
  double alpha = 0.05;
  auto* overlap = stats->add_subcommand("overlap", "Overlap p-value for two neuron files");
  overlap->add_option("--a", a_path, "Neurons file")->required();
  overlap->add_option("--b", b_path, "Neurons file")->required();
  overlap->add_option("--trials", trials, "Permutation trials")->capture_default_str();
  overlap->add_option("--seed", seed, "Permutation seed")->capture_default_str();
  overlap->add_option("--pvalue", pvalue, "permutation|exact")->capture_default_str();
  auto* hb = stats->add_subcommand("hb", "Holm-Bonferroni over a CSV of p-values");
  hb->add_option("--pvalues", pvalues_path, "CSV with columns test_id,p_value")->required();
  hb->add_option("--alpha", alpha, "Family-wise error rate")->capture_default_str();
  hb->add_option("--out", out_path, "Output CSV (stdout if omitted)");

  std::string synth_out, scenario = "overlap";
  std::uint64_t synth_seed = 0;
  bool shuffle_labels = false;
  auto* synth = app.add_subcommand("synth", "Write synthetic fixtures");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--scenario", scenario, "overlap|planted")->capture_default_str();
  synth->add_option("--trials", trials, "Permutation trials written to run.cfg")->capture_default_str();
  synth->add_flag("--shuffle-labels", shuffle_labels, "Planted scenario: destroy the signal");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto m = np::parse_run_manifest(config);
      const auto problems = m.problems();
      for (const auto& p : problems) std::cerr << "error: " << p << '\n';
      if (!problems.empty()) return 1;
      std::cout << "ok: " << m.jobs.size() << " jobs\n";
      return 0;
    }
    if (*run) {
      const auto m = np::parse_run_manifest(config);
      const auto summary = np::run_pipeline(m, {workers});
      print_outcomes(summary);
      return summary.ok() ? 0 : 1;
    }
    if (*analyze) {
      const auto m = np::parse_run_manifest(config);
      np::RunSummary summary;
      summary.jobs = existing_outcomes(m);
      const auto bundle = np::analyze_run(m, summary.jobs, &summary.matrices);
      summary.tables = np::emit_tables(bundle, m.output_dir / "tables");
      print_outcomes(summary);
      return summary.ok() ? 0 : 1;
    }
    if (*report) {
      const auto m = np::parse_run_manifest(config);
      np::RunSummary summary;
      np::write_report(m, np::load_matrices_and_analyze(m), summary);
      std::cerr << summary.heatmaps.size() << " heatmaps, " << summary.tables.size() << " tables\n";
      return 0;
    }
    if (*train) {
      const auto ds = np::load_dataset(dataset);
      np::PreprocessConfig pre;
      pre.ratios = np::parse_ratios(ratios);
      pre.seed = np::derive_seed(tc.seed, "split");
      pre.min_count = min_count;
      pre.filter_mode = np::parse_filter_mode(filter_mode);
      const auto sd = np::preprocess(ds, pre);
      const auto result = np::train(sd, tc);
      np::ProbeFile pf{ds.language, ds.category, ds.model_id, result.probe, result.sampler,
                       tc, pre, result.best_dev_elbo, result.best_epoch, result.trace};
      np::save_probe_file(pf, out_path);
      std::cerr << "trained " << ds.language << ' ' << ds.category << ": best epoch " << result.best_epoch
                << ", dev ELBO " << result.best_dev_elbo << '\n';
      return 0;
    }
    if (*select) {
      const auto pf = np::load_probe_file(probe_path);
      const auto sd = np::preprocess(np::load_dataset(dataset), pf.preprocess);
      const auto& eval_set = np::parse_select_on(select_on) == np::SelectOn::test ? sd.test : sd.dev;
      np::CandidateDump dump;
      auto subset = np::greedy_select(pf.probe, eval_set, k, dump_path.empty() ? nullptr : &dump);
      if (!dump_path.empty()) {
        std::string csv = "step,dim,loglik\n";
        for (std::size_t s = 0; s < dump.size(); ++s) {
          for (std::size_t i = 0; i < dump[s].size(); ++i) {
            if (!std::isfinite(dump[s][i])) continue;
            csv += std::to_string(s + 1) + ',' + std::to_string(i) + ',' + np::format_double(dump[s][i]) + '\n';
          }
        }
        np::write_text_file(dump_path, csv);
      }
      np::save_neurons_file({pf.language, pf.category, pf.model_id, std::move(subset)}, out_path);
      return 0;
    }
    if (*overlap) {
      const auto a = np::load_neurons_file(a_path).subset;
      const auto b = np::load_neurons_file(b_path).subset;
      if (a.d != b.d || a.k() != b.k()) throw np::Error("neuron files differ in d or k");
      const auto m = np::overlap_count(a, b);
      const auto method = np::parse_pvalue_method(pvalue);
      const double p = method == np::PValueMethod::exact ? np::hypergeom_tail(a.d, a.k(), m)
                                                         : np::permutation_pvalue(a.d, a.k(), m, trials, seed);
      json out = {{"d", a.d}, {"k", a.k()}, {"overlap", m}, {"method", pvalue}, {"p_value", p}};
      if (method == np::PValueMethod::permutation) {
        out["trials"] = trials;
        out["seed"] = seed;
      }
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*hb) {
      const auto table = np::read_csv(pvalues_path);
      const auto id_col = table.column("test_id");
      const auto p_col = table.column("p_value");
      np::PValueFamily family;
      family.alpha = alpha;
      for (const auto& row : table.rows) family.tests.push_back({row.at(id_col), std::stod(row.at(p_col))});
      family = np::holm_bonferroni(std::move(family));
      std::string csv = "test_id,p_value,rank,threshold,reject\n";
      for (std::size_t i = 0; i < family.tests.size(); ++i) {
        csv += family.tests[i].id + ',' + np::format_double(family.tests[i].p_value) + ',' +
               std::to_string(family.rank[i]) + ',' + np::format_double(family.threshold[i]) + ',' +
               (family.rejections[i] ? "true" : "false") + '\n';
      }
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        np::write_text_file(out_path, csv);
      }
      return 0;
    }
    if (*synth) {
      if (scenario == "overlap") {
        const auto fx = np::write_overlap_fixture(synth_out, synth_seed, trials);
        std::cout << fx.manifest.string() << '\n';
        return 0;
      }
      if (scenario == "planted") {
        np::PlantedSpec spec;
        spec.seed = synth_seed;
        spec.planted_dims = np::choose_planted_dims(spec.d, 10, synth_seed);
        spec.shuffle_labels = shuffle_labels;
        const fs::path manifest = fs::path(synth_out) / "planted.json";
        np::save_dataset(np::make_planted_dataset(spec), manifest);
        json planted = spec.planted_dims;
        np::write_text_file(fs::path(synth_out) / "planted_dims.json", planted.dump() + "\n");
        std::cout << manifest.string() << '\n';
        return 0;
      }
      throw np::Error("unknown scenario '" + scenario + "' (expected overlap|planted)");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
