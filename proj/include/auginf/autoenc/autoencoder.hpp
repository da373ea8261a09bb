#pragma once

#include "auginf/gnn/layers.hpp"
#include "auginf/numerics/adagrad.hpp"
#include "auginf/numerics/checkpoint.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace auginf::ae {

/// Two-layer GCN encoder: Z = Ahat relu(Ahat X W0) W1.
class GaeModel {
 public:
  GaeModel(std::size_t in, std::size_t hidden, std::size_t embed, Rng& rng, const std::string& prefix = "gae");

  nn::Var encode(nn::Var x, nn::Var ahat);

  std::size_t in_features() const { return w0_.value.rows(); }
  std::size_t hidden() const { return w0_.value.cols(); }
  std::size_t embed_dim() const { return w1_.value.cols(); }
  nn::Parameter& w0() { return w0_; }
  nn::Parameter& w1() { return w1_; }
  std::vector<nn::Parameter*> parameters() { return {&w0_, &w1_}; }
  void save(nn::Checkpoint& ckpt) const;
  void load(const nn::Checkpoint& ckpt);

 private:
  nn::Parameter w0_;
  nn::Parameter w1_;
};

struct VgaeEncoding {
  nn::Var z;
  nn::Var mu;
  nn::Var logvar;  // clamped log sigma^2
};

/// Variational encoder with a shared first layer and separate mean and
/// log-variance heads.
class VgaeModel {
 public:
  static constexpr double kLogvarMin = -10.0;
  static constexpr double kLogvarMax = 10.0;

  VgaeModel(std::size_t in, std::size_t hidden, std::size_t embed, Rng& rng);

  /// Z = mu + exp(logvar / 2) * eps with eps drawn from `rng`. On an eval tape
  /// Z = mu and `rng` is untouched.
  VgaeEncoding encode(nn::Var x, nn::Var ahat, Rng& rng);
  /// Same with a caller-supplied eps (n x d); used for gradient checks.
  VgaeEncoding encode_with_noise(nn::Var x, nn::Var ahat, const nn::Tensor2& eps);

  std::size_t in_features() const { return w0_.value.rows(); }
  std::size_t hidden() const { return w0_.value.cols(); }
  std::size_t embed_dim() const { return w_mu_.value.cols(); }
  nn::Parameter& w0() { return w0_; }
  nn::Parameter& w_mu() { return w_mu_; }
  nn::Parameter& w_logvar() { return w_logvar_; }
  std::vector<nn::Parameter*> parameters() { return {&w0_, &w_mu_, &w_logvar_}; }

  nn::Checkpoint to_checkpoint() const;
  static VgaeModel from_checkpoint(const nn::Checkpoint& ckpt);

 private:
  struct Heads {
    nn::Var mu;
    nn::Var logvar;
  };
  Heads heads(nn::Var x, nn::Var ahat);

  nn::Parameter w0_;
  nn::Parameter w_mu_;
  nn::Parameter w_logvar_;
};

/// Z Z^T, the decoder's logits.
nn::Var inner_product_logits(nn::Var z);
/// sigmoid(Z Z^T).
nn::Var inner_product_decode(nn::Var z);
nn::Tensor2 inner_product_decode(const nn::Tensor2& z);

/// 1 everywhere except the diagonal.
nn::Tensor2 off_diagonal_mask(std::size_t n);

/// (#off-diagonal zeros) / (#off-diagonal ones). Throws ConfigError when the
/// target has no off-diagonal ones.
double positive_weight(const nn::Tensor2& target);

/// Mean binary cross-entropy over off-diagonal pairs, positives weighted by
/// `pos_weight`. The one-argument forms use positive_weight(target).
nn::Var reconstruction_ce(nn::Var probs, const nn::Tensor2& target);
nn::Var reconstruction_ce(nn::Var probs, const nn::Tensor2& target, double pos_weight);
nn::Var reconstruction_ce_logits(nn::Var logits, const nn::Tensor2& target);
nn::Var reconstruction_ce_logits(nn::Var logits, const nn::Tensor2& target, double pos_weight);

/// 0.5 * sum(exp(logvar) + mu^2 - logvar - 1) / n.
nn::Var kld(nn::Var mu, nn::Var logvar);

/// One graph as seen by an autoencoder.
struct GraphInput {
  std::string id;
  nn::Tensor2 features;
  gnn::GraphTensors graph;
};

struct AutoencoderTrainConfig {
  std::size_t epochs = 200;
  nn::AdagradConfig optimizer{0.05, 0.0, 1e-10};
  std::size_t batch_size = 0;  // 0 = every graph in one step
  std::uint64_t seed = 0;
  // VGAE only: loss = CE + w * KLD. Unset means w = 1/n per graph, which puts
  // KLD on the same per-pair scale as the CE; w = 1 collapses the posterior
  // on small subgraphs.
  std::optional<double> kld_weight;
};

/// Eval-mode losses averaged over the training graphs: entry 0 is before
/// training, entry e after epoch e.
struct AutoencoderTrace {
  std::vector<double> total;  // the training objective
  std::vector<double> ce;
  std::vector<double> kld;    // unweighted; empty for the GAE
};

/// Minimizes reconstruction CE + KLD. Throws NumericalError naming the epoch
/// and graph if a loss becomes non-finite.
AutoencoderTrace train_vgae(VgaeModel& model, std::span<const GraphInput> graphs, const AutoencoderTrainConfig& cfg);

/// Minimizes the reconstruction CE of the deterministic encoder.
AutoencoderTrace train_gae(GaeModel& model, std::span<const GraphInput> graphs, const AutoencoderTrainConfig& cfg);

}  // namespace auginf::ae
