#pragma once

#include "auginf/augment/augment.hpp"
#include "auginf/autoenc/autoencoder.hpp"
#include "auginf/gnn/prediction.hpp"
#include "auginf/pipeline/features.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace auginf::pipeline {

/// Which of the three components are switched on. Arms follow the ablation
/// numbering: 1 none, 2 joint, 3 train-aug, 4 test-aug, 5 train+test aug,
/// 6 joint+train aug, 7 joint+test aug, 8 all.
struct AblationConfig {
  int arm = 8;
  bool joint = true;
  bool train_aug = true;
  bool test_aug = true;

  /// Throws ConfigError outside 1..8.
  static AblationConfig from_arm(int arm);
  static AblationConfig from_flags(bool joint, bool train_aug, bool test_aug);
  bool needs_vgae() const { return train_aug || test_aug; }
  std::string describe() const;
};

/// A sample with its graph matrices and [influence | deepwalk] features.
struct PreparedGraph {
  graph::EgoSample sample;
  gnn::GraphTensors graph;
  nn::Tensor2 fixed;

  static PreparedGraph make(graph::EgoSample s, nn::Tensor2 fixed);
  /// An augmented copy of this sample's graph; the fixed features are reused.
  PreparedGraph with_sample(graph::EgoSample augmented) const;
};

struct ModelConfig {
  gnn::HeadKind kind = gnn::HeadKind::kGat;
  std::vector<std::size_t> hidden = {128, 128};
  std::size_t heads = 8;
  std::size_t output_heads = 8;
  std::size_t gae_hidden = 32;
  std::size_t embed_dim = 16;  // GAE embedding width
  std::size_t vgae_hidden = 32;
  std::size_t vgae_embed_dim = 16;
  std::size_t deepwalk_dim = 64;

  FeatureWidths widths() const { return {embed_dim, 2, deepwalk_dim}; }
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

/// GAE encoder feeding a GAT or GCN prediction head.
class JointModel {
 public:
  JointModel(const ModelConfig& cfg, const Rng& rng, double dropout = 0.2);

  struct Output {
    nn::Var logits;
    nn::Var z;
  };
  /// With `train_gae` false the embedding is computed off-tape and enters as
  /// a constant, so no gradient reaches the GAE.
  Output forward(nn::Tape& t, const PreparedGraph& g, Rng& dropout_rng, bool train_gae);

  const ModelConfig& config() const { return cfg_; }
  ae::GaeModel& gae() { return gae_; }
  gnn::PredictionNet& head() { return head_; }
  std::vector<nn::Parameter*> parameters(bool include_gae);

  nn::Checkpoint to_checkpoint() const;
  static JointModel from_checkpoint(const nn::Checkpoint& ckpt);

 private:
  ModelConfig cfg_;
  ae::GaeModel gae_;
  gnn::PredictionNet head_;
};

struct TrainConfig {
  std::size_t epochs = 500;
  nn::AdagradConfig optimizer{0.05, 5e-4, 1e-10};
  double dropout = 0.2;
  aug::AugmentationConfig aug;
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;

  /// Throws ConfigError on zero epochs, a negative learning rate or weight
  /// decay, or an invalid dropout or augmentation setting.
  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct TrainResult {
  std::vector<double> trace;  // mean training loss per epoch
  std::size_t effective_samples = 0;
};

/// The original sample followed by cfg.count augmented copies.
std::vector<PreparedGraph> augment_prepared(const PreparedGraph& g, ae::VgaeModel& vgae,
                                            const aug::AugmentationConfig& cfg);

/// Ego NLL plus, when `joint` and the graph has edges, the GAE
/// reconstruction CE of the same forward pass.
nn::Var sample_loss(nn::Tape& tape, JointModel& model, const PreparedGraph& g, Rng& dropout_rng, bool joint);

/// Trains `model` on `train`. Per sample the loss is the ego NLL, plus the
/// GAE reconstruction CE when abl.joint (graphs without edges contribute no
/// reconstruction term). Without abl.joint the GAE is frozen as given. With
/// abl.train_aug every sample is joined by its augmented copies, which
/// requires `vgae`. Throws NumericalError naming the epoch and sample on a
/// non-finite loss.
TrainResult train_joint(JointModel& model, std::span<const PreparedGraph> train, const TrainConfig& cfg,
                        const AblationConfig& abl, ae::VgaeModel* vgae);

/// Class-1 entry of the mean of 2-class probability vectors.
double average_positive_probability(std::span<const std::vector<double>> probs);

/// Probability that the ego acts. With abl.test_aug the softmax outputs of
/// the original and its augmentations are averaged; requires `vgae`.
double predict(JointModel& model, const PreparedGraph& g, const AblationConfig& abl, ae::VgaeModel* vgae,
               const aug::AugmentationConfig& aug_cfg);

}  // namespace auginf::pipeline
