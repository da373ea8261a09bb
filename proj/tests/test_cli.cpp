#include "doctest.h"

#include "auginf/cli/commands.hpp"
#include "auginf/cli/manifest.hpp"
#include "auginf/cli/synth.hpp"
#include "auginf/error.hpp"
#include "auginf/graph/dataset_io.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unistd.h>

using namespace auginf;
using namespace auginf::cli;
namespace fs = std::filesystem;
using graph::UndirectedGraph;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("auginf_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

UndirectedGraph path_graph(std::size_t n) {
  UndirectedGraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

}  // namespace

TEST_CASE("independent_cascade") {
  Rng rng(1);
  const auto g = watts_strogatz(50, 4, 0.2, rng);
  const std::vector<std::size_t> seeds{3, 17};
  CHECK(independent_cascade(g, seeds, 0.0, rng) == seeds);
  CHECK(independent_cascade(path_graph(6), {2}, 1.0, rng).size() == 6);

  // path of 3 from one end: the far end needs two successes
  const auto path = path_graph(3);
  const int trials = 10000;
  int far = 0;
  for (int t = 0; t < trials; ++t) {
    const auto act = independent_cascade(path, {0}, 0.5, rng);
    far += std::find(act.begin(), act.end(), 2) != act.end();
  }
  const double p_hat = static_cast<double>(far) / trials;
  const double se = std::sqrt(0.25 * 0.75 / trials);
  CHECK(std::abs(p_hat - 0.25) <= 3 * se);
}

TEST_CASE("timed_cascade steps follow edges") {
  Rng rng(2);
  const auto g = watts_strogatz(120, 6, 0.1, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = timed_cascade(g, {0, 1, 2}, 0.3, rng);
    CHECK(t[0] == 0);
    CHECK(t[2] == 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (t[v] <= 0) continue;
      bool parent = false;
      for (std::size_t u = 0; u < g.size(); ++u) parent = parent || (g.has_edge(u, v) && t[u] == t[v] - 1);
      CHECK(parent);
    }
  }
}

TEST_CASE("base graph generators") {
  Rng rng(3);
  const auto ws = watts_strogatz(40, 4, 0.0, rng);
  CHECK(ws.edge_count() == 80);
  for (std::size_t v = 0; v < 40; ++v) CHECK(ws.has_edge(v, (v + 1) % 40));
  const auto rewired = watts_strogatz(40, 4, 0.5, rng);
  CHECK(rewired.edge_count() == 80);
  const auto ba = barabasi_albert(60, 3, rng);
  CHECK(ba.edge_count() == (60 - 3) * 3);
}

TEST_CASE("synthesize") {
  CascadeConfig cfg;
  SUBCASE("p = 0 leaves a single class and is rejected") {
    cfg.p = 0.0;
    CHECK_THROWS_AS(synthesize(cfg), ConfigError);
  }
  SUBCASE("invalid configs") {
    cfg.p = 1.5;
    CHECK_THROWS_AS(synthesize(cfg), ConfigError);
    cfg.p = 0.15;
    cfg.seed_set = 0;
    CHECK_THROWS_AS(synthesize(cfg), ConfigError);
  }
  SUBCASE("default config is balanced enough and valid") {
    const auto d = synthesize(cfg);
    CHECK(d.samples.size() == 500);
    std::size_t pos = 0;
    for (const auto& s : d.samples) pos += s.label;
    const double rate = static_cast<double>(pos) / 500.0;
    CHECK(rate >= 0.10);
    CHECK(rate <= 0.90);
    CHECK(graph::validate_dataset(d).empty());
    for (const auto& s : d.samples) CHECK(s.size() == 30);
    CHECK(d.splits.train.size() + d.splits.valid.size() + d.splits.test.size() == 500);
    // stratified: each split's positive rate stays near the overall rate
    for (const auto* idx : {&d.splits.train, &d.splits.test}) {
      std::size_t p = 0;
      for (std::size_t i : *idx) p += d.samples[i].label;
      CHECK(std::abs(static_cast<double>(p) / static_cast<double>(idx->size()) - rate) < 0.02);
    }
  }
  SUBCASE("fixed seed gives byte-identical files") {
    cfg.samples = 80;
    cfg.seed = 9;
    const fs::path a = scratch("synth_a") / "s.jsonl", b = scratch("synth_b") / "s.jsonl";
    fs::create_directories(a.parent_path());
    fs::create_directories(b.parent_path());
    graph::save_dataset(synthesize(cfg), a);
    graph::save_dataset(synthesize(cfg), b);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(graph::splits_path(a)) == slurp(graph::splits_path(b)));
    CHECK(slurp(graph::base_graph_path(a)) == slurp(graph::base_graph_path(b)));
    CHECK(graph::load_dataset(a) == synthesize(cfg));
  }
}

TEST_CASE("sha256 and manifest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  RunManifest m;
  m.command = "train";
  m.args = {"train", "--seed", "4"};
  m.config = {{"x", 1.5}};
  m.seeds = {4};
  m.inputs = {{"/d/s.jsonl", std::string(64, 'a')}};
  m.outputs = {{"model.ckpt", std::string(64, 'b')}};
  const auto back = RunManifest::from_json(m.to_json());
  CHECK(back.command == m.command);
  CHECK(back.args == m.args);
  CHECK(back.config == m.config);
  CHECK(back.seeds == m.seeds);
  CHECK(back.inputs == m.inputs);
  CHECK(back.outputs == m.outputs);
  CHECK_THROWS_AS(RunManifest::from_json({{"version", 99}}), DataError);
}

namespace {

// Small model and dataset so each command finishes in well under a second.
const std::vector<std::string> kSmall{"--hidden", "8,8", "--heads", "2", "--embed-dim", "4", "--deepwalk-dim", "8",
                                      "--epochs", "3", "--ae-epochs", "10", "--batch-size", "8"};

std::vector<std::string> cmd(std::vector<std::string> head, bool small = true) {
  if (small) head.insert(head.end(), kSmall.begin(), kSmall.end());
  if (std::find(head.begin(), head.end(), "--log-level") == head.end()) {
    head.push_back("--log-level");
    head.push_back("warn");
  }
  return head;
}

std::vector<std::string> lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("commands") {
  spdlog::set_level(spdlog::level::warn);
  const fs::path root = scratch("cmds");
  const std::string data = (root / "data" / "samples.jsonl").string();
  REQUIRE(run({"synth", "--out", (root / "data").string(), "--nodes", "80", "--samples", "60", "--n-target", "8",
               "--seed-set", "4", "--p", "0.3", "--seed", "3", "--log-level", "warn"}) == 0);
  REQUIRE(fs::exists(data));
  CHECK(graph::validate_dataset(graph::load_dataset(data)).empty());

  SUBCASE("eval with test-time augmentation but no VGAE is a config error") {
    REQUIRE(run(cmd({"train", "--data", data, "--out", (root / "t1").string(), "--arm", "1"})) == 0);
    CHECK(!fs::exists(root / "t1" / "vgae.ckpt"));
    const std::string ckpt = (root / "t1" / "model.ckpt").string();
    CHECK(run({"eval", "--data", data, "--out", (root / "e").string(), "--checkpoint", ckpt, "--arm", "4",
               "--log-level", "off"}) == 2);
    CHECK(run({"eval", "--data", data, "--out", (root / "e").string(), "--checkpoint", ckpt, "--log-level", "off"}) ==
          0);
  }
  SUBCASE("train then eval matches the ablation record for the same seed") {
    REQUIRE(run(cmd({"train", "--data", data, "--out", (root / "t8").string(), "--arm", "8", "--seed", "5"})) == 0);
    REQUIRE(run({"eval", "--data", data, "--out", (root / "e8").string(), "--checkpoint",
                 (root / "t8" / "model.ckpt").string(), "--vgae", (root / "t8" / "vgae.ckpt").string(),
                 "--log-level", "warn"}) == 0);
    REQUIRE(run(cmd({"ablate", "--data", data, "--out", (root / "a8").string(), "--arms", "8", "--runs", "1",
                     "--seed", "5"})) == 0);
    CHECK(lines(root / "e8" / "metrics.jsonl") == lines(root / "a8" / "records.jsonl"));
  }
  SUBCASE("ablate writes eight rows per seed and hashes that verify") {
    REQUIRE(run(cmd({"ablate", "--data", data, "--out", (root / "ab").string(), "--runs", "2"})) == 0);
    CHECK(lines(root / "ab" / "records.jsonl").size() == 16);
    const auto m = RunManifest::load(root / "ab" / "manifest.json");
    CHECK(m.seeds == std::vector<std::uint64_t>{0, 1});
    REQUIRE(m.outputs.size() == 2);
    for (const auto& f : m.outputs) CHECK(sha256_file(root / "ab" / f.path) == f.sha256);
    for (const auto& f : m.inputs) CHECK(sha256_file(f.path) == f.sha256);

    SUBCASE("replay reproduces the records") {
      CHECK(run({"replay", "--manifest", (root / "ab" / "manifest.json").string(), "--log-level", "warn"}) == 0);
      CHECK(slurp(root / "ab.replay" / "records.jsonl") == slurp(root / "ab" / "records.jsonl"));
    }
    SUBCASE("replay refuses changed inputs") {
      std::ofstream(graph::splits_path(data), std::ios::app) << ' ';
      CHECK(run({"replay", "--manifest", (root / "ab" / "manifest.json").string(), "--log-level", "off"}) == 3);
    }
  }
  SUBCASE("threshold sweep gives a nonincreasing added-edge percentage") {
    REQUIRE(run(cmd({"sweep", "--data", data, "--out", (root / "sw").string(), "--sweep", "threshold", "--grid",
                     "0.2,0.4,0.5,0.6,0.7,0.8,0.9", "--edges-only", "--runs", "2"})) == 0);
    const auto rows = lines(root / "sw" / "curve.csv");
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == "threshold,added_edge_pct");
    double prev = 1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double pct = std::stod(rows[i].substr(rows[i].find(',') + 1));
      CHECK(pct <= prev);
      prev = pct;
    }
  }
  SUBCASE("count sweep trains each grid point") {
    REQUIRE(run(cmd({"sweep", "--data", data, "--out", (root / "sc").string(), "--grid", "0,2", "--runs", "1"})) == 0);
    const auto rows = lines(root / "sc" / "curve.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "count,added_edge_pct,auc_mean,auc_std,f1_mean,f1_std");
    CHECK(rows[1].rfind("0.0,0.0,", 0) == 0);
  }
  SUBCASE("exit codes") {
    CHECK(run({"bogus"}) == 2);
    CHECK(run({"train", "--data", data}) == 2);
    CHECK(run(cmd({"train", "--data", data, "--out", (root / "x").string(), "--lr", "-1"})) == 2);
    CHECK(run(cmd({"train", "--data", data, "--out", (root / "x").string(), "--model", "mlp"})) == 2);
    CHECK(run({"eval", "--data", data, "--out", (root / "x").string(), "--checkpoint", (root / "none").string(),
               "--log-level", "off"}) == 2);
    CHECK(run({"synth", "--out", (root / "x").string(), "--p", "0", "--samples", "40", "--log-level", "off"}) == 2);
    const fs::path junk = root / "junk.jsonl";
    std::ofstream(junk) << "{not json\n";
    CHECK(run(cmd({"train", "--data", junk.string(), "--out", (root / "x").string(), "--log-level", "off"})) == 3);
    CHECK(run(cmd({"train", "--data", data, "--out", (root / "x").string(), "--lr", "1e300", "--log-level",
                   "off"})) == 4);
  }
  fs::remove_all(root.parent_path());
}
