#pragma once

#include "auginf/graph/graph.hpp"
#include "auginf/pipeline/deepwalk.hpp"
#include "auginf/pipeline/joint.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace auginf::pipeline {

/// Train/valid/test samples with features, plus everything needed to build
/// and pretrain the models.
struct Experiment {
  std::vector<PreparedGraph> train;
  std::vector<PreparedGraph> valid;
  std::vector<PreparedGraph> test;
  ModelConfig model;
  ae::AutoencoderTrainConfig vgae_train;  // seed is overridden per run
  ae::AutoencoderTrainConfig gae_pretrain;
};

/// Rows of a base-graph embedding for the sample's nodes, looked up through
/// node_ids. Throws ValidationError if an id is not a base-graph index.
nn::Tensor2 rows_for_nodes(const nn::Tensor2& global, const graph::EgoSample& s);

/// Features and PreparedGraph for each split. DeepWalk runs once on the base
/// graph when the dataset has one, otherwise on each subgraph (stream keyed
/// by `seed` and sample id); dimension 0 disables it.
Experiment prepare_experiment(const graph::Dataset& data, const ModelConfig& model, const DeepWalkConfig& dw,
                              std::uint64_t seed);

/// Models that depend only on the run seed and are shared by every arm.
struct RunArtifacts {
  explicit RunArtifacts(std::uint64_t seed) : run_seed(seed) {}

  std::uint64_t run_seed = 0;
  std::optional<ae::VgaeModel> vgae;
  std::optional<ae::GaeModel> pretrained_gae;
};

/// Fills in whatever `arms` need for this run seed: the augmentation VGAE
/// (when some arm augments and `allow_vgae`) and the pretrained GAE (when
/// some arm is not joint).
void prepare_run(const Experiment& exp, std::span<const AblationConfig> arms, RunArtifacts& run, bool allow_vgae = true);

/// Per-run training config: `base` with seed and augmentation seed set from
/// the run seed.
TrainConfig run_config(const TrainConfig& base, std::uint64_t run_seed);

/// Fresh model for a run; non-joint arms get the pretrained GAE weights.
JointModel initial_model(const Experiment& exp, const TrainConfig& cfg, const AblationConfig& abl,
                         const RunArtifacts& run);

struct MetricRecord {
  int arm = 0;
  std::uint64_t run_seed = 0;
  double auc = 0;
  double f1 = 0;

  nlohmann::ordered_json to_json() const;
  static MetricRecord from_json(const nlohmann::json& j);
  friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

/// Test-set scores and labels for a trained model.
struct Scores {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
};
Scores score_split(JointModel& model, std::span<const PreparedGraph> split, const AblationConfig& abl,
                   ae::VgaeModel* vgae, const aug::AugmentationConfig& aug_cfg);

/// Edges added by augmentation as a percentage of the original edge count,
/// averaged over the cfg.count copies of every graph in `split`.
double added_edge_percentage(std::span<const PreparedGraph> split, ae::VgaeModel& vgae,
                             const aug::AugmentationConfig& cfg);

/// Trains and evaluates one arm on the test split.
MetricRecord run_arm(const Experiment& exp, const TrainConfig& base, const AblationConfig& abl, RunArtifacts& run);

struct ArmSummary {
  int arm = 0;
  std::size_t runs = 0;
  double auc_mean = 0, auc_std = 0;
  double f1_mean = 0, f1_std = 0;
};

/// Per-seed difference arm - baseline, summarized.
struct PairedDelta {
  int arm = 0;
  int baseline = 0;
  double auc_mean = 0, auc_std = 0;
  double f1_mean = 0, f1_std = 0;
};

struct AblationReport {
  std::vector<MetricRecord> records;
  std::vector<ArmSummary> arms;
  std::vector<PairedDelta> deltas;

  /// Human-readable table, mean +- std per arm and deltas against the baseline.
  std::string table() const;
};

/// Mean and sample standard deviation (0 for a single value).
std::pair<double, double> mean_std(std::span<const double> v);

/// Summaries and paired deltas (against arm 1 when present, else the first
/// arm seen) from a list of records.
AblationReport summarize(std::vector<MetricRecord> records);

/// Every arm for every seed. Throws ConfigError on an empty arm list or a
/// repeated seed.
AblationReport run_ablation(const Experiment& exp, const TrainConfig& base, std::span<const AblationConfig> arms,
                            std::span<const std::uint64_t> seeds, bool allow_vgae = true);

}  // namespace auginf::pipeline
