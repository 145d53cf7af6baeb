#include "neuroprobe/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "neuroprobe/error.hpp"
#include "neuroprobe/pipeline.hpp"
#include "neuroprobe/random.hpp"
#include "neuroprobe/serialize.hpp"

namespace neuroprobe {

namespace fs = std::filesystem;

namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

std::vector<std::size_t> choose_planted_dims(std::size_t d, std::size_t count, std::uint64_t seed) {
  if (count > d) throw Error("cannot plant " + std::to_string(count) + " dims in d = " + std::to_string(d));
  std::vector<std::size_t> all(d);
  std::iota(all.begin(), all.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "planted-dims"));
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(all[i], all[i + uniform_below(rng, d - i)]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

ProbeDataset make_planted_dataset(const PlantedSpec& spec) {
  if (spec.d == 0 || spec.num_classes < 2 || spec.tokens == 0 || spec.lemmata == 0) {
    throw Error("planted spec needs d > 0, >= 2 classes, tokens and lemmata");
  }
  for (auto i : spec.planted_dims) {
    if (i >= spec.d) throw Error("planted dim " + std::to_string(i) + " out of range");
  }

  ProbeDataset ds;
  ds.language = spec.language;
  ds.category = spec.category;
  ds.model_id = spec.model_id;
  ds.d = spec.d;
  for (std::size_t c = 0; c < spec.num_classes; ++c) ds.inventory.push_back(numbered("c", c, 1));
  std::sort(ds.inventory.begin(), ds.inventory.end());

  Rng rng(derive_seed(spec.seed, "planted-data"));
  std::vector<double> sign(spec.d, 0.0);
  for (auto i : spec.planted_dims) sign[i] = uniform01(rng) < 0.5 ? -1.0 : 1.0;

  std::vector<std::size_t> labels(spec.tokens);
  for (std::size_t t = 0; t < spec.tokens; ++t) labels[t] = t % spec.num_classes;
  shuffle(std::span<std::size_t>(labels), rng);

  const double centre = 0.5 * static_cast<double>(spec.num_classes - 1);
  ds.records.reserve(spec.tokens);
  for (std::size_t t = 0; t < spec.tokens; ++t) {
    TokenRecord r;
    r.embedding.resize(spec.d);
    const double level = spec.offset * (static_cast<double>(labels[t]) - centre);
    for (std::size_t i = 0; i < spec.d; ++i) {
      r.embedding[i] = static_cast<float>(standard_normal(rng) + sign[i] * level);
    }
    r.label = ds.inventory[labels[t]];
    r.lemma = numbered("lem", t % spec.lemmata, 4);
    r.sentence_id = numbered("s", t / 20, 5);
    r.token_index = static_cast<int>(t % 20);
    ds.records.push_back(std::move(r));
  }

  if (spec.shuffle_labels) {
    std::vector<std::string> shuffled;
    shuffled.reserve(ds.records.size());
    for (const auto& r : ds.records) shuffled.push_back(r.label);
    Rng perm(derive_seed(spec.seed, "label-shuffle"));
    shuffle(std::span<std::string>(shuffled), perm);
    for (std::size_t t = 0; t < ds.records.size(); ++t) ds.records[t].label = shuffled[t];
  }
  return ds;
}

SplitRatios planted_split_ratios() { return {0.6, 0.1, 0.3}; }

OverlapFixture write_overlap_fixture(const fs::path& dir, std::uint64_t seed, std::uint64_t trials) {
  constexpr std::size_t kDims = 64;
  constexpr std::size_t kPlanted = 10;
  const auto pool = choose_planted_dims(kDims, 3 * kPlanted, seed);
  Rng rng(derive_seed(seed, "fixture-groups"));
  std::vector<std::size_t> order = pool;
  shuffle(std::span<std::size_t>(order), rng);
  std::vector<std::vector<std::size_t>> groups(3);
  for (std::size_t g = 0; g < 3; ++g) {
    groups[g].assign(order.begin() + static_cast<std::ptrdiff_t>(g * kPlanted),
                     order.begin() + static_cast<std::ptrdiff_t>((g + 1) * kPlanted));
    std::sort(groups[g].begin(), groups[g].end());
  }

  OverlapFixture fx;
  fx.languages = {"aaa", "bbb", "ccc", "ddd"};
  fx.planted = {groups[0], groups[0], groups[1], groups[2]};

  RunManifest m;
  m.k = kPlanted;
  m.trials = trials;
  m.alpha = 0.05;
  m.seed = seed;
  m.preprocess.ratios = planted_split_ratios();
  m.output_dir = "out";
  m.metadata = "metadata.csv";
  m.similarity = "similarity.csv";
  for (std::size_t l = 0; l < fx.languages.size(); ++l) {
    PlantedSpec spec;
    spec.language = fx.languages[l];
    spec.planted_dims = fx.planted[l];
    spec.seed = derive_seed(seed, "fixture-" + fx.languages[l]);
    const fs::path rel = fs::path("data") / (fx.languages[l] + ".json");
    save_dataset(make_planted_dataset(spec), dir / rel);
    m.jobs.push_back({spec.model_id, spec.language, spec.category, rel});
  }

  write_text_file(dir / "metadata.csv",
                  "language,genus,family,pretrain_size_gib\n"
                  "aaa,Alpha,Synthetic,10\n"
                  "bbb,Alpha,Synthetic,20\n"
                  "ccc,Beta,Synthetic,5\n"
                  "ddd,Beta,Synthetic,2.5\n");
  write_text_file(dir / "similarity.csv",
                  "lang_a,lang_b,similarity\n"
                  "aaa,bbb,0.9\n"
                  "aaa,ccc,0.3\n"
                  "aaa,ddd,0.2\n"
                  "bbb,ccc,0.4\n"
                  "bbb,ddd,0.1\n"
                  "ccc,ddd,0.6\n");
  fx.manifest = dir / "run.cfg";
  write_text_file(fx.manifest, format_run_manifest(m));
  return fx;
}

}  // namespace neuroprobe
