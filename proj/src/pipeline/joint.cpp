#include "auginf/pipeline/joint.hpp"

#include "auginf/error.hpp"
#include "auginf/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace auginf::pipeline {

using nn::Tensor2;
using nn::Var;

AblationConfig AblationConfig::from_arm(int arm) {
  static constexpr bool kFlags[8][3] = {{false, false, false}, {true, false, false}, {false, true, false},
                                        {false, false, true},  {false, true, true},  {true, true, false},
                                        {true, false, true},   {true, true, true}};
  if (arm < 1 || arm > 8) throw ConfigError("ablation arm must be in 1..8, got " + std::to_string(arm));
  const auto& f = kFlags[arm - 1];
  return {arm, f[0], f[1], f[2]};
}

AblationConfig AblationConfig::from_flags(bool joint, bool train_aug, bool test_aug) {
  for (int arm = 1; arm <= 8; ++arm) {
    const AblationConfig c = from_arm(arm);
    if (c.joint == joint && c.train_aug == train_aug && c.test_aug == test_aug) return c;
  }
  throw ContractError("unreachable ablation flag combination");
}

std::string AblationConfig::describe() const {
  std::string s = "#" + std::to_string(arm);
  if (!joint && !train_aug && !test_aug) return s + " gnn-only";
  if (joint) s += " joint";
  if (train_aug) s += " train-aug";
  if (test_aug) s += " test-aug";
  return s;
}

PreparedGraph PreparedGraph::make(graph::EgoSample s, nn::Tensor2 fixed) {
  if (fixed.rows() != s.size()) {
    throw DimensionError("PreparedGraph: features " + fixed.shape_str() + " for " + std::to_string(s.size()) +
                         " nodes");
  }
  PreparedGraph p;
  p.graph = gnn::GraphTensors::from_adjacency(s.graph.adjacency_matrix());
  p.sample = std::move(s);
  p.fixed = std::move(fixed);
  return p;
}

PreparedGraph PreparedGraph::with_sample(graph::EgoSample augmented) const { return make(std::move(augmented), fixed); }

nlohmann::json ModelConfig::to_json() const {
  return {{"model", gnn::to_string(kind)}, {"hidden", hidden},         {"heads", heads},
          {"output_heads", output_heads},  {"gae_hidden", gae_hidden}, {"embed_dim", embed_dim},
          {"vgae_hidden", vgae_hidden},    {"vgae_embed_dim", vgae_embed_dim}, {"deepwalk_dim", deepwalk_dim}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.kind = gnn::head_kind_from_string(j.at("model").get<std::string>());
  c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  c.heads = j.at("heads").get<std::size_t>();
  c.output_heads = j.at("output_heads").get<std::size_t>();
  c.gae_hidden = j.at("gae_hidden").get<std::size_t>();
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.vgae_hidden = j.at("vgae_hidden").get<std::size_t>();
  c.vgae_embed_dim = j.at("vgae_embed_dim").get<std::size_t>();
  c.deepwalk_dim = j.at("deepwalk_dim").get<std::size_t>();
  return c;
}

namespace {

gnn::PredictionConfig head_config(const ModelConfig& cfg, double dropout) {
  gnn::PredictionConfig p;
  p.kind = cfg.kind;
  p.in_features = cfg.widths().total();
  p.hidden = cfg.hidden;
  p.heads = cfg.heads;
  p.output_heads = cfg.output_heads;
  p.dropout = dropout;
  return p;
}

ae::GaeModel make_gae(const ModelConfig& cfg, const Rng& rng) {
  Rng r = rng.split(0x676165u);
  return ae::GaeModel(cfg.widths().fixed(), cfg.gae_hidden, cfg.embed_dim, r);
}

gnn::PredictionNet make_head(const ModelConfig& cfg, const Rng& rng, double dropout) {
  Rng r = rng.split(0x68656164u);
  return gnn::PredictionNet(head_config(cfg, dropout), r);
}

std::uint64_t id_tag(const std::string& id) { return hash_tag(id.data(), id.size()); }

}  // namespace

JointModel::JointModel(const ModelConfig& cfg, const Rng& rng, double dropout)
    : cfg_(cfg), gae_(make_gae(cfg, rng)), head_(make_head(cfg, rng, dropout)) {}

JointModel::Output JointModel::forward(nn::Tape& t, const PreparedGraph& g, Rng& dropout_rng, bool train_gae) {
  Var fixed = t.constant(g.fixed);
  Var ahat = t.constant(g.graph.ahat);
  Var z;
  if (train_gae) {
    z = gae_.encode(fixed, ahat);
  } else {
    nn::Tape off(nn::Mode::kEval);
    Tensor2 zv = gae_.encode(off.constant(g.fixed), off.constant(g.graph.ahat)).value();
    z = t.constant(std::move(zv));
  }
  const Var parts[] = {z, fixed};
  return {head_.forward(nn::concat_cols(parts), g.graph, ahat, dropout_rng), z};
}

std::vector<nn::Parameter*> JointModel::parameters(bool include_gae) {
  std::vector<nn::Parameter*> out;
  if (include_gae) out = gae_.parameters();
  for (auto* p : head_.parameters()) out.push_back(p);
  return out;
}

nn::Checkpoint JointModel::to_checkpoint() const {
  nn::Checkpoint c;
  c.meta = {{"kind", "joint"}, {"model", cfg_.to_json()}, {"dropout", head_.config().dropout}};
  gae_.save(c);
  head_.save(c);
  return c;
}

JointModel JointModel::from_checkpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.meta.value("kind", "") != "joint") throw DataError("checkpoint is not a joint model");
  JointModel m(ModelConfig::from_json(ckpt.meta.at("model")), Rng(0), ckpt.meta.at("dropout").get<double>());
  m.gae_.load(ckpt);
  m.head_.load(ckpt);
  return m;
}

void TrainConfig::validate() const {
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (!(optimizer.learning_rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
  if (!(optimizer.weight_decay >= 0.0)) throw ConfigError("weight decay must be non-negative");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0, 1)");
  aug.validate();
}

nlohmann::json TrainConfig::to_json() const {
  return {{"epochs", epochs},
          {"lr", optimizer.learning_rate},
          {"weight_decay", optimizer.weight_decay},
          {"adagrad_epsilon", optimizer.epsilon},
          {"dropout", dropout},
          {"aug_threshold", aug.threshold},
          {"aug_count", aug.count},
          {"aug_seed", aug.seed},
          {"batch_size", batch_size},
          {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<std::size_t>();
  c.optimizer.learning_rate = j.at("lr").get<double>();
  c.optimizer.weight_decay = j.at("weight_decay").get<double>();
  c.optimizer.epsilon = j.at("adagrad_epsilon").get<double>();
  c.dropout = j.at("dropout").get<double>();
  c.aug.threshold = j.at("aug_threshold").get<double>();
  c.aug.count = j.at("aug_count").get<std::size_t>();
  c.aug.seed = j.at("aug_seed").get<std::uint64_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

std::vector<PreparedGraph> augment_prepared(const PreparedGraph& g, ae::VgaeModel& vgae,
                                            const aug::AugmentationConfig& cfg) {
  std::vector<PreparedGraph> out{g};
  for (auto& s : aug::generate_augmentations(g.sample, g.fixed, vgae, cfg)) out.push_back(g.with_sample(std::move(s)));
  return out;
}

Var sample_loss(nn::Tape& tape, JointModel& model, const PreparedGraph& g, Rng& dropout_rng, bool joint) {
  const auto out = model.forward(tape, g, dropout_rng, joint);
  Var loss = gnn::ego_nll(out.logits, g.sample.ego, g.sample.label);
  if (joint && g.sample.graph.edge_count() > 0) {
    loss = nn::add(loss, ae::reconstruction_ce_logits(ae::inner_product_logits(out.z), g.graph.adjacency));
  }
  return loss;
}

TrainResult train_joint(JointModel& model, std::span<const PreparedGraph> train, const TrainConfig& cfg,
                        const AblationConfig& abl, ae::VgaeModel* vgae) {
  cfg.validate();
  if (train.empty()) throw ConfigError("train_joint: empty training set");
  if (abl.train_aug && vgae == nullptr) throw ConfigError("train-time augmentation requires a VGAE");
  model.head().set_dropout(cfg.dropout);

  std::vector<PreparedGraph> effective;
  for (const auto& g : train) {
    if (abl.train_aug) {
      for (auto& a : augment_prepared(g, *vgae, cfg.aug)) effective.push_back(std::move(a));
    } else {
      effective.push_back(g);
    }
  }

  nn::Adagrad opt(cfg.optimizer, model.parameters(abl.joint));
  const Rng root(cfg.seed);
  const std::size_t count = effective.size();
  const std::size_t batch = cfg.batch_size == 0 ? count : std::min(cfg.batch_size, count);
  std::vector<std::size_t> order(count);

  TrainResult result;
  result.effective_samples = count;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    if (batch < count) {
      Rng r = root.split({0x6f72646572u, epoch});
      for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[r.uniform_int(i)]);
    }
    double epoch_loss = 0;
    for (std::size_t start = 0; start < count; start += batch) {
      const std::size_t stop = std::min(count, start + batch);
      opt.zero_grad();
      for (std::size_t k = start; k < stop; ++k) {
        const PreparedGraph& g = effective[order[k]];
        Rng drop = root.split({0x64726f70u, epoch, id_tag(g.sample.id)});
        try {
          nn::Tape tape(nn::Mode::kTrain);
          const Var loss = sample_loss(tape, model, g, drop, abl.joint);
          epoch_loss += loss.value().item();
          tape.backward(nn::scale(loss, 1.0 / static_cast<double>(stop - start)));
        } catch (const NumericalError& e) {
          throw NumericalError("training diverged at epoch " + std::to_string(epoch) + " on sample '" +
                               g.sample.id + "': " + e.what());
        }
      }
      opt.step();
    }
    result.trace.push_back(epoch_loss / static_cast<double>(count));
  }
  return result;
}

double average_positive_probability(std::span<const std::vector<double>> probs) {
  if (probs.empty()) throw ContractError("average_positive_probability: no predictions");
  double s = 0;
  for (const auto& p : probs) s += p.at(1);
  return s / static_cast<double>(probs.size());
}

double predict(JointModel& model, const PreparedGraph& g, const AblationConfig& abl, ae::VgaeModel* vgae,
               const aug::AugmentationConfig& aug_cfg) {
  if (abl.test_aug && vgae == nullptr) throw ConfigError("test-time augmentation requires a VGAE");
  std::vector<std::vector<double>> probs;
  auto run = [&](const PreparedGraph& p) {
    nn::Tape t(nn::Mode::kEval);
    Rng unused(0);
    const auto out = model.forward(t, p, unused, false);
    probs.push_back(gnn::ego_probabilities(out.logits.value(), p.sample.ego));
  };
  if (abl.test_aug) {
    for (const auto& p : augment_prepared(g, *vgae, aug_cfg)) run(p);
  } else {
    run(g);
  }
  return average_positive_probability(probs);
}

}  // namespace auginf::pipeline
