#include "auginf/pipeline/ablation.hpp"

#include "auginf/error.hpp"
#include "auginf/pipeline/metrics.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace auginf::pipeline {

nn::Tensor2 rows_for_nodes(const nn::Tensor2& global, const graph::EgoSample& s) {
  if (s.graph.node_ids.size() != s.size()) {
    throw ValidationError(s.id, "base graph given but the sample has no node_ids");
  }
  nn::Tensor2 out(s.size(), global.cols());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::string& id = s.graph.node_ids[k];
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), v);
    if (ec != std::errc() || ptr != id.data() + id.size() || v >= global.rows()) {
      throw ValidationError(s.id, "node id '" + id + "' is not a base-graph node");
    }
    out.mat().row(static_cast<Eigen::Index>(k)) = global.mat().row(static_cast<Eigen::Index>(v));
  }
  return out;
}

Experiment prepare_experiment(const graph::Dataset& data, const ModelConfig& model, const DeepWalkConfig& dw,
                              std::uint64_t seed) {
  if (dw.dim != model.deepwalk_dim) {
    throw ConfigError("deepwalk dimension " + std::to_string(dw.dim) + " does not match the model's " +
                      std::to_string(model.deepwalk_dim));
  }
  std::vector<PreparedGraph> all;
  all.reserve(data.samples.size());
  const Rng root(seed);
  nn::Tensor2 global;
  if (dw.dim > 0 && data.base) {
    Rng r = root.split(0x6477u);
    global = deepwalk_embed(*data.base, dw, r);
  }
  for (const auto& s : data.samples) {
    nn::Tensor2 emb(s.size(), dw.dim);
    if (dw.dim == 0) {
      // no embedding columns
    } else if (data.base) {
      emb = rows_for_nodes(global, s);
    } else {
      Rng r = root.split({0x6477u, hash_tag(s.id.data(), s.id.size())});
      emb = deepwalk_embed(s.graph, dw, r);
    }
    all.push_back(PreparedGraph::make(s, fixed_features(s, emb)));
  }
  Experiment exp;
  exp.model = model;
  auto pick = [&](const std::vector<std::size_t>& idx, std::vector<PreparedGraph>& out) {
    for (std::size_t i : idx) {
      if (i >= all.size()) throw DataError("split index " + std::to_string(i) + " out of range");
      out.push_back(all[i]);
    }
  };
  pick(data.splits.train, exp.train);
  pick(data.splits.valid, exp.valid);
  pick(data.splits.test, exp.test);
  return exp;
}

namespace {

std::vector<ae::GraphInput> autoencoder_inputs(std::span<const PreparedGraph> graphs) {
  std::vector<ae::GraphInput> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) {
    if (g.sample.graph.edge_count() > 0) out.push_back({g.sample.id, g.fixed, g.graph});
  }
  return out;
}

}  // namespace

void prepare_run(const Experiment& exp, std::span<const AblationConfig> arms, RunArtifacts& run, bool allow_vgae) {
  const bool want_vgae = allow_vgae && std::any_of(arms.begin(), arms.end(), [](auto& a) { return a.needs_vgae(); });
  const bool want_gae = std::any_of(arms.begin(), arms.end(), [](auto& a) { return !a.joint; });
  const Rng root(run.run_seed);
  const auto inputs = (want_vgae && !run.vgae) || (want_gae && !run.pretrained_gae)
                          ? autoencoder_inputs(exp.train)
                          : std::vector<ae::GraphInput>{};
  if (want_vgae && !run.vgae) {
    Rng init = root.split(0x76676165u);
    ae::VgaeModel v(exp.model.widths().fixed(), exp.model.vgae_hidden, exp.model.vgae_embed_dim, init);
    ae::AutoencoderTrainConfig cfg = exp.vgae_train;
    cfg.seed = root.split(0x76676174u).next_u64();
    const auto trace = ae::train_vgae(v, inputs, cfg);
    spdlog::info("run {}: VGAE reconstruction CE {:.4f} -> {:.4f}", run.run_seed, trace.ce.front(), trace.ce.back());
    run.vgae = std::move(v);
  }
  if (want_gae && !run.pretrained_gae) {
    JointModel fresh(exp.model, root);
    ae::GaeModel g = fresh.gae();
    ae::AutoencoderTrainConfig cfg = exp.gae_pretrain;
    cfg.seed = root.split(0x67616574u).next_u64();
    const auto trace = ae::train_gae(g, inputs, cfg);
    spdlog::info("run {}: GAE reconstruction CE {:.4f} -> {:.4f}", run.run_seed, trace.ce.front(), trace.ce.back());
    run.pretrained_gae = std::move(g);
  }
}

TrainConfig run_config(const TrainConfig& base, std::uint64_t run_seed) {
  TrainConfig cfg = base;
  cfg.seed = run_seed;
  cfg.aug.seed = run_seed;
  return cfg;
}

JointModel initial_model(const Experiment& exp, const TrainConfig& cfg, const AblationConfig& abl,
                         const RunArtifacts& run) {
  JointModel m(exp.model, Rng(cfg.seed), cfg.dropout);
  if (!abl.joint) {
    if (!run.pretrained_gae) throw ConfigError("arm " + abl.describe() + " needs a pretrained GAE");
    m.gae() = *run.pretrained_gae;
  }
  return m;
}

nlohmann::ordered_json MetricRecord::to_json() const {
  nlohmann::ordered_json j;
  j["arm"] = arm;
  j["run_seed"] = run_seed;
  j["auc"] = auc;
  j["f1"] = f1;
  return j;
}

MetricRecord MetricRecord::from_json(const nlohmann::json& j) {
  return {j.at("arm").get<int>(), j.at("run_seed").get<std::uint64_t>(), j.at("auc").get<double>(),
          j.at("f1").get<double>()};
}

Scores score_split(JointModel& model, std::span<const PreparedGraph> split, const AblationConfig& abl,
                   ae::VgaeModel* vgae, const aug::AugmentationConfig& aug_cfg) {
  Scores s;
  for (const auto& g : split) {
    s.scores.push_back(predict(model, g, abl, vgae, aug_cfg));
    s.labels.push_back(g.sample.label);
  }
  return s;
}

double added_edge_percentage(std::span<const PreparedGraph> split, ae::VgaeModel& vgae,
                             const aug::AugmentationConfig& cfg) {
  double original = 0, added = 0;
  for (const auto& g : split) {
    const double base = static_cast<double>(g.sample.graph.edge_count());
    original += base * static_cast<double>(cfg.count);
    for (const auto& a : aug::generate_augmentations(g.sample, g.fixed, vgae, cfg))
      added += static_cast<double>(a.graph.edge_count()) - base;
  }
  return original > 0 ? 100.0 * added / original : 0.0;
}

MetricRecord run_arm(const Experiment& exp, const TrainConfig& base, const AblationConfig& abl, RunArtifacts& run) {
  const TrainConfig cfg = run_config(base, run.run_seed);
  ae::VgaeModel* vgae = run.vgae ? &*run.vgae : nullptr;
  if (abl.needs_vgae() && vgae == nullptr) throw ConfigError("arm " + abl.describe() + " needs a VGAE");
  JointModel model = initial_model(exp, cfg, abl, run);
  const auto trained = train_joint(model, exp.train, cfg, abl, vgae);
  const Scores s = score_split(model, exp.test, abl, vgae, cfg.aug);
  MetricRecord r{abl.arm, run.run_seed, auc(s.scores, s.labels), f1(s.scores, s.labels)};
  spdlog::info("arm {} seed {}: loss {:.4f} -> {:.4f}, auc {:.4f}, f1 {:.4f}", abl.describe(), run.run_seed,
               trained.trace.front(), trained.trace.back(), r.auc, r.f1);
  return r;
}

std::pair<double, double> mean_std(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  if (v.size() < 2) return {m, 0.0};
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

AblationReport summarize(std::vector<MetricRecord> records) {
  AblationReport rep;
  rep.records = std::move(records);
  std::vector<int> order;
  std::map<int, std::map<std::uint64_t, const MetricRecord*>> by_arm;
  for (const auto& r : rep.records) {
    if (!by_arm.count(r.arm)) order.push_back(r.arm);
    by_arm[r.arm][r.run_seed] = &r;
  }
  for (int arm : order) {
    std::vector<double> a, f;
    for (const auto& [seed, r] : by_arm[arm]) {
      a.push_back(r->auc);
      f.push_back(r->f1);
    }
    ArmSummary s{arm, a.size()};
    std::tie(s.auc_mean, s.auc_std) = mean_std(a);
    std::tie(s.f1_mean, s.f1_std) = mean_std(f);
    rep.arms.push_back(s);
  }
  if (order.empty()) return rep;
  const int baseline = by_arm.count(1) ? 1 : order.front();
  for (int arm : order) {
    if (arm == baseline) continue;
    std::vector<double> da, df;
    for (const auto& [seed, r] : by_arm[arm]) {
      auto it = by_arm[baseline].find(seed);
      if (it == by_arm[baseline].end()) continue;
      da.push_back(r->auc - it->second->auc);
      df.push_back(r->f1 - it->second->f1);
    }
    if (da.empty()) continue;
    PairedDelta d{arm, baseline};
    std::tie(d.auc_mean, d.auc_std) = mean_std(da);
    std::tie(d.f1_mean, d.f1_std) = mean_std(df);
    rep.deltas.push_back(d);
  }
  return rep;
}

std::string AblationReport::table() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-28s %5s %18s %18s\n", "arm", "runs", "AUC", "F1");
  os << buf;
  for (const auto& s : arms) {
    std::snprintf(buf, sizeof buf, "%-28s %5zu %9.4f+-%-7.4f %9.4f+-%-7.4f\n",
                  AblationConfig::from_arm(s.arm).describe().c_str(), s.runs, s.auc_mean, s.auc_std, s.f1_mean,
                  s.f1_std);
    os << buf;
  }
  if (!deltas.empty()) {
    os << "\npaired deltas (arm - baseline, per seed)\n";
    for (const auto& d : deltas) {
      std::snprintf(buf, sizeof buf, "#%d - #%d %20s %+9.4f+-%-7.4f %+9.4f+-%-7.4f\n", d.arm, d.baseline, "",
                    d.auc_mean, d.auc_std, d.f1_mean, d.f1_std);
      os << buf;
    }
  }
  return os.str();
}

AblationReport run_ablation(const Experiment& exp, const TrainConfig& base, std::span<const AblationConfig> arms,
                            std::span<const std::uint64_t> seeds, bool allow_vgae) {
  if (arms.empty()) throw ConfigError("run_ablation: no arms given");
  if (seeds.empty()) throw ConfigError("run_ablation: no run seeds given");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("run_ablation: duplicate run seed; repeated seeds would give identical runs");
  }
  std::vector<MetricRecord> records;
  for (std::uint64_t seed : seeds) {
    RunArtifacts run{seed};
    prepare_run(exp, arms, run, allow_vgae);
    for (const auto& abl : arms) records.push_back(run_arm(exp, base, abl, run));
  }
  return summarize(std::move(records));
}

}  // namespace auginf::pipeline
