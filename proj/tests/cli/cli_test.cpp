#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "neuroprobe/report.hpp"
#include "neuroprobe/serialize.hpp"

namespace np = neuroprobe;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result probe(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + PROBE_BIN + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, NoVerbIsAnError) { EXPECT_NE(probe("").status, 0); }

TEST(Cli, StatsHbMatchesWorkedExamples) {
  fixture::TempDir dir("cli");
  np::write_text_file(dir / "p.csv", "test_id,p_value\na,0.01\nb,0.02\nc,0.04\n");
  const auto r = probe("stats hb --pvalues " + q(dir / "p.csv") + " --alpha 0.05");
  ASSERT_EQ(r.status, 0);
  const auto t = np::parse_csv(r.out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"test_id", "p_value", "rank", "threshold", "reject"}));
  for (const auto& row : t.rows) EXPECT_EQ(row[t.column("reject")], "true");

  np::write_text_file(dir / "p2.csv", "test_id,p_value\na,0.02\nb,0.03\nc,0.04\n");
  const auto r2 = probe("stats hb --pvalues " + q(dir / "p2.csv") + " --alpha 0.05");
  for (const auto& row : np::parse_csv(r2.out).rows) EXPECT_EQ(row.back(), "false");
}

TEST(Cli, StatsOverlap) {
  fixture::TempDir dir("cli");
  np::save_neurons_file({"a", "G", "m", np::NeuronSubset::of({1, 2, 3, 4}, 20)}, dir / "a.json");
  np::save_neurons_file({"b", "G", "m", np::NeuronSubset::of({3, 4, 5, 6}, 20)}, dir / "b.json");
  const auto r = probe("stats overlap --a " + q(dir / "a.json") + " --b " + q(dir / "b.json") + " --pvalue exact");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("overlap").get<int>(), 2);
  EXPECT_NEAR(j.at("p_value").get<double>(), 1.0 - (1820.0 + 2240.0) / 4845.0, 1e-12);
  const auto perm = probe("stats overlap --a " + q(dir / "a.json") + " --b " + q(dir / "b.json") +
                          " --trials 1000 --seed 13");
  EXPECT_EQ(perm.out, probe("stats overlap --a " + q(dir / "a.json") + " --b " + q(dir / "b.json") +
                            " --trials 1000 --seed 13").out);
}

TEST(Cli, TrainThenSelect) {
  fixture::TempDir dir("cli");
  ASSERT_EQ(probe("synth --scenario planted --out " + q(dir.path()) + " --seed 2").status, 0);
  ASSERT_EQ(probe("train --dataset " + q(dir / "planted.json") + " --out " + q(dir / "probe.json") +
                  " --epochs 3 --ratios 0.6,0.1,0.3")
                .status,
            0);
  ASSERT_EQ(probe("select --probe " + q(dir / "probe.json") + " --dataset " + q(dir / "planted.json") +
                  " --k 5 --out " + q(dir / "n.json") + " --dump " + q(dir / "dump.csv"))
                .status,
            0);
  const auto nf = np::load_neurons_file(dir / "n.json");
  EXPECT_EQ(nf.subset.k(), 5u);
  EXPECT_EQ(nf.subset.d, 64u);
  EXPECT_EQ(np::read_csv(dir / "dump.csv").rows.size(), 64u + 63 + 62 + 61 + 60);
}

TEST(Cli, ValidateRunAndExitCodes) {
  fixture::TempDir dir("cli");
  const auto made = probe("synth --out " + q(dir.path()) + " --seed 4 --trials 500");
  ASSERT_EQ(made.status, 0);
  const auto cfg = dir / "run.cfg";
  // Shorter training keeps the test quick.
  np::write_text_file(cfg, np::read_text_file(cfg) + "epochs = 2\n");
  EXPECT_EQ(probe("validate --config " + q(cfg)).status, 0);
  EXPECT_EQ(probe("run --config " + q(cfg) + " --jobs 2").status, 0);
  EXPECT_TRUE(fs::exists(dir / "out/figures/synthetic__Synthetic.svg"));
  EXPECT_EQ(probe("analyze --config " + q(cfg)).status, 0);
  EXPECT_EQ(probe("report --config " + q(cfg)).status, 0);

  const auto summary = nlohmann::json::parse(np::read_text_file(dir / "out/run_summary.json"));
  EXPECT_EQ(summary.at("failed").get<int>(), 0);

  np::write_text_file(dir / "bad.json", "{}");
  np::write_text_file(cfg, np::read_text_file(cfg) + "job = synthetic zzz Synthetic bad.json\n");
  EXPECT_EQ(probe("run --config " + q(cfg)).status, 1);

  np::write_text_file(dir / "dup.cfg", "job = m a C bad.json\njob = m a C bad.json\n");
  EXPECT_NE(probe("validate --config " + q(dir / "dup.cfg")).status, 0);
}

TEST(Cli, ProbeSeedEnvironmentOverridesManifest) {
  fixture::TempDir dir("cli");
  np::write_text_file(dir / "empty.cfg", "seed = 1\n");
  // An empty run succeeds under any seed; a malformed override is rejected.
  EXPECT_EQ(probe("run --config " + q(dir / "empty.cfg"), "PROBE_SEED=77").status, 0);
  EXPECT_NE(probe("run --config " + q(dir / "empty.cfg"), "PROBE_SEED=abc").status, 0);
}
