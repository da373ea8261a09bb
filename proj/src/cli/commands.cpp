#include "auginf/cli/commands.hpp"

#include "auginf/cli/manifest.hpp"
#include "auginf/cli/synth.hpp"
#include "auginf/error.hpp"
#include "auginf/graph/dataset_io.hpp"
#include "auginf/pipeline/ablation.hpp"
#include "auginf/pipeline/metrics.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

namespace auginf::cli {

namespace fs = std::filesystem;
using pipeline::AblationConfig;

namespace {

struct Options {
  std::string data, out, checkpoint, vgae, manifest;
  std::string model = "gat";
  int arm = 8;
  std::vector<int> arms{1, 2, 3, 4, 5, 6, 7, 8};
  double aug_threshold = 0.8;
  std::size_t aug_count = 3;
  std::size_t epochs = 500;
  double lr = 0.05;
  double weight_decay = 5e-4;
  double dropout = 0.2;
  std::size_t heads = 8;
  std::vector<std::size_t> hidden{128, 128};
  std::size_t embed_dim = 16;
  std::uint64_t seed = 0;
  std::size_t runs = 5;
  std::size_t batch_size = 0;
  std::size_t ae_epochs = 200;
  std::size_t ae_batch_size = 0;
  std::size_t deepwalk_dim = 64;
  std::string split = "test";
  std::string sweep = "count";
  std::vector<double> grid;
  bool edges_only = false;
  std::string graph = "ws";
  CascadeConfig cascade;
  std::string log_level = "info";
};

struct Resolved {
  pipeline::ModelConfig model;
  pipeline::TrainConfig train;
  pipeline::DeepWalkConfig deepwalk;
  ae::AutoencoderTrainConfig autoencoder;
};

nlohmann::json deepwalk_json(const pipeline::DeepWalkConfig& c) {
  return {{"dim", c.dim},       {"walks_per_node", c.walks_per_node}, {"walk_length", c.walk_length},
          {"window", c.window}, {"negatives", c.negatives},           {"learning_rate", c.learning_rate}};
}

pipeline::DeepWalkConfig deepwalk_from_json(const nlohmann::json& j) {
  pipeline::DeepWalkConfig c;
  c.dim = j.at("dim");
  c.walks_per_node = j.at("walks_per_node");
  c.walk_length = j.at("walk_length");
  c.window = j.at("window");
  c.negatives = j.at("negatives");
  c.learning_rate = j.at("learning_rate");
  return c;
}

Resolved resolve(const Options& o) {
  Resolved r;
  r.model.kind = gnn::head_kind_from_string(o.model);
  if (o.hidden.empty()) throw ConfigError("--hidden needs at least one width");
  r.model.hidden = o.hidden;
  r.model.heads = r.model.output_heads = o.heads;
  r.model.embed_dim = r.model.vgae_embed_dim = o.embed_dim;
  r.model.deepwalk_dim = o.deepwalk_dim;
  r.train.epochs = o.epochs;
  r.train.optimizer.learning_rate = o.lr;
  r.train.optimizer.weight_decay = o.weight_decay;
  r.train.dropout = o.dropout;
  r.train.aug.threshold = o.aug_threshold;
  r.train.aug.count = o.aug_count;
  r.train.batch_size = o.batch_size;
  r.train.validate();
  r.deepwalk.dim = o.deepwalk_dim;
  if (o.deepwalk_dim > 0) r.deepwalk.validate();
  r.autoencoder.epochs = o.ae_epochs;
  r.autoencoder.batch_size = o.ae_batch_size;
  if (o.ae_epochs == 0) throw ConfigError("--ae-epochs must be positive");
  return r;
}

nlohmann::json config_json(const Resolved& r, const Options& o) {
  return {{"model", r.model.to_json()},
          {"train", r.train.to_json()},
          {"deepwalk", deepwalk_json(r.deepwalk)},
          {"autoencoder",
           {{"epochs", r.autoencoder.epochs},
            {"batch_size", r.autoencoder.batch_size},
            {"lr", r.autoencoder.optimizer.learning_rate},
            {"weight_decay", r.autoencoder.optimizer.weight_decay}}},
          {"feature_seed", o.seed}};
}

graph::Dataset load_data(const Options& o) {
  if (o.data.empty()) throw ConfigError("--data is required");
  return graph::load_dataset(o.data);
}

pipeline::Experiment load_experiment(const Options& o, const Resolved& r) {
  pipeline::Experiment exp = pipeline::prepare_experiment(load_data(o), r.model, r.deepwalk, o.seed);
  exp.vgae_train = r.autoencoder;
  exp.gae_pretrain = r.autoencoder;
  if (exp.train.empty()) throw DataError("dataset has an empty train split");
  return exp;
}

void add_dataset_inputs(RunManifest& m, const fs::path& data) {
  m.add_input(data);
  for (const auto& p : {graph::splits_path(data), graph::base_graph_path(data)})
    if (fs::exists(p)) m.add_input(p);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

std::string jsonl(const std::vector<pipeline::MetricRecord>& records) {
  std::string s;
  for (const auto& r : records) s += r.to_json().dump() + '\n';
  return s;
}

fs::path prepare_out(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
  fs::create_directories(o.out);
  return o.out;
}

/// Path-valued flags rewritten to absolute paths so a manifest can be
/// replayed from any working directory.
std::vector<std::string> absolutize(std::vector<std::string> args) {
  static const std::vector<std::string> kPathFlags{"--data", "--out", "--checkpoint", "--vgae", "--manifest"};
  auto abs = [](const std::string& p) { return fs::absolute(p).lexically_normal().string(); };
  for (std::size_t i = 0; i < args.size(); ++i) {
    for (const auto& f : kPathFlags) {
      if (args[i] == f && i + 1 < args.size()) {
        args[i + 1] = abs(args[i + 1]);
        ++i;
        break;
      }
      if (args[i].rfind(f + "=", 0) == 0) {
        args[i] = f + "=" + abs(args[i].substr(f.size() + 1));
        break;
      }
    }
  }
  return args;
}

int cmd_synth(const Options& o, const std::vector<std::string>& args) {
  CascadeConfig cfg = o.cascade;
  if (o.graph == "ws") {
    cfg.graph = BaseGraph::kSmallWorld;
  } else if (o.graph == "ba") {
    cfg.graph = BaseGraph::kPreferential;
  } else {
    throw ConfigError("--graph must be ws or ba");
  }
  cfg.seed = o.seed;
  const graph::Dataset d = synthesize(cfg);
  const fs::path out = prepare_out(o);
  const fs::path data = out / "samples.jsonl";
  graph::save_dataset(d, data);
  const auto positives = static_cast<std::size_t>(
      std::count_if(d.samples.begin(), d.samples.end(), [](const auto& s) { return s.label == 1; }));

  RunManifest m;
  m.command = "synth";
  m.args = args;
  m.config = {{"cascade", cfg.to_json()}, {"positives", positives}, {"samples", d.samples.size()}};
  m.seeds = {cfg.seed};
  for (const auto& p : {data, graph::splits_path(data), graph::base_graph_path(data)})
    m.add_output(out, p.filename().string());
  m.save(out);
  std::cout << "wrote " << data.string() << " (" << positives << "/" << d.samples.size() << " positive)\n";
  return 0;
}

int cmd_train(const Options& o, const std::vector<std::string>& args) {
  const Resolved r = resolve(o);
  const AblationConfig abl = AblationConfig::from_arm(o.arm);
  const pipeline::Experiment exp = load_experiment(o, r);
  const fs::path out = prepare_out(o);

  pipeline::RunArtifacts run{o.seed};
  const std::vector<AblationConfig> arms{abl};
  pipeline::prepare_run(exp, arms, run);
  const pipeline::TrainConfig cfg = pipeline::run_config(r.train, o.seed);
  pipeline::JointModel model = pipeline::initial_model(exp, cfg, abl, run);
  const auto result = pipeline::train_joint(model, exp.train, cfg, abl, run.vgae ? &*run.vgae : nullptr);

  nn::Checkpoint ckpt = model.to_checkpoint();
  ckpt.meta["run"] = {{"arm", abl.arm},
                      {"seed", o.seed},
                      {"feature_seed", o.seed},
                      {"train", cfg.to_json()},
                      {"deepwalk", deepwalk_json(r.deepwalk)}};
  nn::save_checkpoint(ckpt, out / "model.ckpt");
  if (run.vgae) nn::save_checkpoint(run.vgae->to_checkpoint(), out / "vgae.ckpt");
  nlohmann::ordered_json trace;
  trace["arm"] = abl.arm;
  trace["seed"] = o.seed;
  trace["effective_samples"] = result.effective_samples;
  trace["loss"] = result.trace;
  write_text(out / "trace.json", trace.dump(2) + '\n');

  RunManifest m;
  m.command = "train";
  m.args = args;
  m.config = config_json(r, o);
  m.config["arm"] = abl.arm;
  m.seeds = {o.seed};
  add_dataset_inputs(m, o.data);
  m.add_output(out, "model.ckpt");
  if (run.vgae) m.add_output(out, "vgae.ckpt");
  m.add_output(out, "trace.json");
  m.save(out);
  std::cout << "arm " << abl.describe() << ": loss " << result.trace.front() << " -> " << result.trace.back()
            << " over " << result.effective_samples << " examples\n";
  return 0;
}

int cmd_eval(const Options& o, const std::vector<std::string>& args, const CLI::App& sub) {
  if (o.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  if (!fs::exists(o.checkpoint)) throw ConfigError("missing checkpoint " + o.checkpoint);
  const nn::Checkpoint ckpt = nn::load_checkpoint(o.checkpoint);
  if (!ckpt.meta.contains("run")) throw ConfigError(o.checkpoint + " was not written by train");
  const nlohmann::json& meta = ckpt.meta.at("run");
  pipeline::JointModel model = pipeline::JointModel::from_checkpoint(ckpt);
  pipeline::TrainConfig cfg = pipeline::TrainConfig::from_json(meta.at("train"));
  if (sub.count("--aug-count") > 0) cfg.aug.count = o.aug_count;
  if (sub.count("--aug-threshold") > 0) cfg.aug.threshold = o.aug_threshold;
  cfg.aug.validate();
  const AblationConfig abl = AblationConfig::from_arm(sub.count("--arm") > 0 ? o.arm : meta.at("arm").get<int>());
  const auto run_seed = meta.at("seed").get<std::uint64_t>();

  std::optional<ae::VgaeModel> vgae;
  if (abl.test_aug) {
    if (o.vgae.empty()) throw ConfigError("arm " + abl.describe() + " uses test-time augmentation and needs --vgae");
    if (!fs::exists(o.vgae)) throw ConfigError("missing checkpoint " + o.vgae);
    vgae = ae::VgaeModel::from_checkpoint(nn::load_checkpoint(o.vgae));
  }
  const pipeline::Experiment exp = pipeline::prepare_experiment(
      load_data(o), model.config(), deepwalk_from_json(meta.at("deepwalk")), meta.at("feature_seed").get<std::uint64_t>());
  const std::vector<pipeline::PreparedGraph>* split = nullptr;
  if (o.split == "test") {
    split = &exp.test;
  } else if (o.split == "valid") {
    split = &exp.valid;
  } else if (o.split == "train") {
    split = &exp.train;
  } else {
    throw ConfigError("--split must be train, valid or test");
  }
  const auto scores = pipeline::score_split(model, *split, abl, vgae ? &*vgae : nullptr, cfg.aug);
  const pipeline::MetricRecord rec{abl.arm, run_seed, pipeline::auc(scores.scores, scores.labels),
                                   pipeline::f1(scores.scores, scores.labels)};

  const fs::path out = prepare_out(o);
  write_text(out / "metrics.jsonl", jsonl({rec}));
  const std::string table = pipeline::summarize({rec}).table();
  write_text(out / "report.txt", table);

  RunManifest m;
  m.command = "eval";
  m.args = args;
  m.config = {{"arm", abl.arm}, {"split", o.split}, {"aug", {{"threshold", cfg.aug.threshold}, {"count", cfg.aug.count}}}};
  m.seeds = {run_seed};
  add_dataset_inputs(m, o.data);
  m.add_input(o.checkpoint);
  if (vgae) m.add_input(o.vgae);
  m.add_output(out, "metrics.jsonl");
  m.add_output(out, "report.txt");
  m.save(out);
  std::cout << rec.to_json().dump() << '\n';
  return 0;
}

std::vector<std::uint64_t> run_seeds(const Options& o) {
  if (o.runs == 0) throw ConfigError("--runs must be positive");
  std::vector<std::uint64_t> seeds(o.runs);
  std::iota(seeds.begin(), seeds.end(), o.seed);
  return seeds;
}

int cmd_ablate(const Options& o, const std::vector<std::string>& args) {
  const Resolved r = resolve(o);
  std::vector<AblationConfig> arms;
  for (int a : o.arms) arms.push_back(AblationConfig::from_arm(a));
  const auto seeds = run_seeds(o);
  const pipeline::Experiment exp = load_experiment(o, r);
  const fs::path out = prepare_out(o);
  const auto report = pipeline::run_ablation(exp, r.train, arms, seeds);
  write_text(out / "records.jsonl", jsonl(report.records));
  write_text(out / "table.txt", report.table());

  RunManifest m;
  m.command = "ablate";
  m.args = args;
  m.config = config_json(r, o);
  m.config["arms"] = o.arms;
  m.seeds = seeds;
  add_dataset_inputs(m, o.data);
  m.add_output(out, "records.jsonl");
  m.add_output(out, "table.txt");
  m.save(out);
  std::cout << report.table();
  return 0;
}

int cmd_sweep(const Options& o, const std::vector<std::string>& args) {
  const Resolved r = resolve(o);
  const AblationConfig abl = AblationConfig::from_arm(o.arm);
  if (!abl.needs_vgae()) throw ConfigError("sweep needs an arm that augments");
  const bool by_count = o.sweep == "count";
  if (!by_count && o.sweep != "threshold") throw ConfigError("--sweep must be count or threshold");
  std::vector<double> grid = o.grid;
  if (grid.empty()) grid = by_count ? std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8} : std::vector<double>{0.6, 0.7, 0.8, 0.9};
  std::vector<pipeline::TrainConfig> configs;
  for (double v : grid) {
    pipeline::TrainConfig c = r.train;
    if (by_count) {
      if (v < 0 || v != std::floor(v)) throw ConfigError("augmentation counts must be whole numbers");
      c.aug.count = static_cast<std::size_t>(v);
    } else {
      c.aug.threshold = v;
    }
    c.validate();
    configs.push_back(c);
  }
  const auto seeds = run_seeds(o);
  const pipeline::Experiment exp = load_experiment(o, r);
  const fs::path out = prepare_out(o);

  const std::vector<AblationConfig> arms{abl};
  std::vector<std::vector<double>> pct(grid.size()), aucs(grid.size()), f1s(grid.size());
  std::string records;
  for (std::uint64_t seed : seeds) {
    pipeline::RunArtifacts run{seed};
    pipeline::prepare_run(exp, arms, run);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto cfg = pipeline::run_config(configs[k], seed);
      pct[k].push_back(pipeline::added_edge_percentage(exp.train, *run.vgae, cfg.aug));
      nlohmann::ordered_json line;
      line["value"] = grid[k];
      line["run_seed"] = seed;
      line["added_edge_pct"] = pct[k].back();
      if (!o.edges_only) {
        const auto rec = pipeline::run_arm(exp, configs[k], abl, run);
        aucs[k].push_back(rec.auc);
        f1s[k].push_back(rec.f1);
        line["arm"] = rec.arm;
        line["auc"] = rec.auc;
        line["f1"] = rec.f1;
      }
      records += line.dump() + '\n';
    }
  }
  auto num = [](double v) { return nlohmann::json(v).dump(); };  // shortest round-trip form
  std::string csv = o.sweep + ",added_edge_pct" + (o.edges_only ? "" : ",auc_mean,auc_std,f1_mean,f1_std") + "\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    csv += num(grid[k]) + ',' + num(pipeline::mean_std(pct[k]).first);
    if (!o.edges_only) {
      const auto [am, as] = pipeline::mean_std(aucs[k]);
      const auto [fm, fs_] = pipeline::mean_std(f1s[k]);
      csv += ',' + num(am) + ',' + num(as) + ',' + num(fm) + ',' + num(fs_);
    }
    csv += '\n';
  }
  write_text(out / "curve.csv", csv);
  write_text(out / "records.jsonl", records);

  RunManifest m;
  m.command = "sweep";
  m.args = args;
  m.config = config_json(r, o);
  m.config["arm"] = abl.arm;
  m.config["sweep"] = {{"over", o.sweep}, {"grid", grid}, {"edges_only", o.edges_only}};
  m.seeds = seeds;
  add_dataset_inputs(m, o.data);
  m.add_output(out, "curve.csv");
  m.add_output(out, "records.jsonl");
  m.save(out);
  std::cout << csv;
  return 0;
}

int cmd_replay(const Options& o) {
  if (o.manifest.empty()) throw ConfigError("--manifest is required");
  const RunManifest m = RunManifest::load(o.manifest);
  if (m.command == "replay") throw ConfigError("cannot replay a replay");
  for (const auto& f : m.inputs) {
    if (!fs::exists(f.path)) throw DataError("replay input missing: " + f.path);
    if (sha256_file(f.path) != f.sha256) throw DataError("replay input changed since the run: " + f.path);
  }
  std::vector<std::string> args = m.args;
  std::string original;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      original = args[i + 1];
      args[i + 1] = o.out.empty() ? original + ".replay" : o.out;
    } else if (args[i].rfind("--out=", 0) == 0) {
      original = args[i].substr(6);
      args[i] = "--out=" + (o.out.empty() ? original + ".replay" : o.out);
    }
  }
  if (original.empty()) throw DataError("manifest arguments carry no --out");
  const fs::path target = o.out.empty() ? fs::path(original + ".replay") : fs::path(o.out);
  if (fs::weakly_canonical(target) == fs::weakly_canonical(original))
    throw ConfigError("replay output must differ from the original output directory");

  spdlog::info("replaying {} into {}", m.command, target.string());
  if (const int rc = run(args); rc != 0) return rc;
  const RunManifest again = RunManifest::load(target / "manifest.json");
  bool same = again.config == m.config;
  if (!same) spdlog::error("resolved config differs from the manifest");
  for (const auto& f : m.outputs) {
    const auto it = std::find_if(again.outputs.begin(), again.outputs.end(),
                                 [&](const FileHash& g) { return g.path == f.path; });
    const bool match = it != again.outputs.end() && it->sha256 == f.sha256;
    std::cout << (match ? "match    " : "MISMATCH ") << f.path << '\n';
    same = same && match;
  }
  if (!same) throw DataError("replay did not reproduce the recorded outputs");
  return 0;
}

void add_model_options(CLI::App* s, Options& o) {
  s->add_option("--data", o.data, "samples.jsonl written by synth")->required();
  s->add_option("--out", o.out, "output directory")->required();
  s->add_option("--model", o.model, "prediction head")->check(CLI::IsMember({"gat", "gcn"}))->capture_default_str();
  s->add_option("--aug-threshold", o.aug_threshold, "edge probability cut")->capture_default_str();
  s->add_option("--aug-count", o.aug_count, "augmentations per graph")->capture_default_str();
  s->add_option("--epochs", o.epochs)->capture_default_str();
  s->add_option("--lr", o.lr)->capture_default_str();
  s->add_option("--weight-decay", o.weight_decay)->capture_default_str();
  s->add_option("--dropout", o.dropout)->capture_default_str();
  s->add_option("--heads", o.heads, "attention heads per GAT layer")->capture_default_str();
  s->add_option("--hidden", o.hidden, "hidden widths, comma separated")->delimiter(',')->capture_default_str();
  s->add_option("--embed-dim", o.embed_dim, "GAE and VGAE embedding width")->capture_default_str();
  s->add_option("--seed", o.seed)->capture_default_str();
  s->add_option("--batch-size", o.batch_size, "0 = full batch")->capture_default_str();
  s->add_option("--ae-epochs", o.ae_epochs, "VGAE and GAE pretraining epochs")->capture_default_str();
  s->add_option("--ae-batch-size", o.ae_batch_size)->capture_default_str();
  s->add_option("--deepwalk-dim", o.deepwalk_dim, "0 disables DeepWalk features")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Social influence prediction with graph augmentation"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --log-level follow the subcommand
  Options o;
  app.add_option("--log-level", o.log_level)->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  auto* synth = app.add_subcommand("synth", "generate a synthetic cascade dataset");
  synth->add_option("--out", o.out)->required();
  synth->add_option("--seed", o.seed)->capture_default_str();
  synth->add_option("--graph", o.graph, "ws (small world) or ba (preferential attachment)")->capture_default_str();
  synth->add_option("--nodes", o.cascade.nodes)->capture_default_str();
  synth->add_option("--ws-k", o.cascade.ws_k)->capture_default_str();
  synth->add_option("--ws-beta", o.cascade.ws_beta)->capture_default_str();
  synth->add_option("--ba-m", o.cascade.ba_m)->capture_default_str();
  synth->add_option("--seed-set", o.cascade.seed_set)->capture_default_str();
  synth->add_option("--p", o.cascade.p, "activation probability")->capture_default_str();
  synth->add_option("--samples", o.cascade.samples)->capture_default_str();
  synth->add_option("--n-target", o.cascade.n_target)->capture_default_str();
  synth->add_option("--restart", o.cascade.rwr_restart)->capture_default_str();
  synth->add_option("--frontier-share", o.cascade.frontier_share)->capture_default_str();

  auto* train = app.add_subcommand("train", "pretrain the VGAE/GAE and train one arm");
  add_model_options(train, o);
  train->add_option("--arm", o.arm)->capture_default_str();

  auto* eval = app.add_subcommand("eval", "score a trained checkpoint");
  eval->add_option("--data", o.data)->required();
  eval->add_option("--out", o.out)->required();
  eval->add_option("--checkpoint", o.checkpoint, "model.ckpt from train")->required();
  eval->add_option("--vgae", o.vgae, "vgae.ckpt, needed for test-time augmentation");
  eval->add_option("--arm", o.arm, "defaults to the trained arm");
  eval->add_option("--aug-threshold", o.aug_threshold);
  eval->add_option("--aug-count", o.aug_count);
  eval->add_option("--split", o.split)->capture_default_str();

  auto* ablate = app.add_subcommand("ablate", "all arms over several seeds");
  add_model_options(ablate, o);
  ablate->add_option("--arms", o.arms)->delimiter(',')->capture_default_str();
  ablate->add_option("--runs", o.runs)->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "vary the augmentation count or threshold");
  add_model_options(sweep, o);
  sweep->add_option("--arm", o.arm)->capture_default_str();
  sweep->add_option("--runs", o.runs)->capture_default_str();
  sweep->add_option("--sweep", o.sweep, "count or threshold")->capture_default_str();
  sweep->add_option("--grid", o.grid, "values, comma separated")->delimiter(',');
  sweep->add_flag("--edges-only", o.edges_only, "report added-edge percentages without training");

  auto* replay = app.add_subcommand("replay", "re-run a command from its manifest and compare hashes");
  replay->add_option("--manifest", o.manifest)->required();
  replay->add_option("--out", o.out, "defaults to <original out>.replay");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
  }
  spdlog::set_level(spdlog::level::from_str(o.log_level));

  const std::vector<std::string> recorded = absolutize(args);
  try {
    if (*synth) return cmd_synth(o, recorded);
    if (*train) return cmd_train(o, recorded);
    if (*eval) return cmd_eval(o, recorded, *eval);
    if (*ablate) return cmd_ablate(o, recorded);
    if (*sweep) return cmd_sweep(o, recorded);
    return cmd_replay(o);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(e.exit_code());
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(ExitCode::kData);
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(ExitCode::kData);
  } catch (const std::exception& e) {
    spdlog::error("unexpected: {}", e.what());
    return 1;
  }
}

}  // namespace auginf::cli
