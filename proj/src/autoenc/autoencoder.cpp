#include "auginf/autoenc/autoencoder.hpp"

#include "auginf/error.hpp"
#include "auginf/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace auginf::ae {

using nn::Tensor2;
using nn::Var;

GaeModel::GaeModel(std::size_t in, std::size_t hidden, std::size_t embed, Rng& rng, const std::string& prefix)
    : w0_(prefix + ".w0", gnn::glorot(in, hidden, rng)), w1_(prefix + ".w1", gnn::glorot(hidden, embed, rng)) {}

Var GaeModel::encode(Var x, Var ahat) {
  Var h = nn::relu(nn::matmul(ahat, nn::matmul(x, x.tape().param(w0_))));
  return nn::matmul(ahat, nn::matmul(h, x.tape().param(w1_)));
}

void GaeModel::save(nn::Checkpoint& ckpt) const {
  ckpt.add(w0_);
  ckpt.add(w1_);
}

void GaeModel::load(const nn::Checkpoint& ckpt) {
  ckpt.restore(w0_);
  ckpt.restore(w1_);
}

VgaeModel::VgaeModel(std::size_t in, std::size_t hidden, std::size_t embed, Rng& rng)
    : w0_("vgae.w0", gnn::glorot(in, hidden, rng)),
      w_mu_("vgae.w_mu", gnn::glorot(hidden, embed, rng)),
      w_logvar_("vgae.w_logvar", gnn::glorot(hidden, embed, rng)) {}

VgaeModel::Heads VgaeModel::heads(Var x, Var ahat) {
  nn::Tape& t = x.tape();
  Var h = nn::relu(nn::matmul(ahat, nn::matmul(x, t.param(w0_))));
  Var ah = nn::matmul(ahat, h);
  Var mu = nn::matmul(ah, t.param(w_mu_));
  Var logvar = nn::clamp(nn::matmul(ah, t.param(w_logvar_)), kLogvarMin, kLogvarMax);
  return {mu, logvar};
}

VgaeEncoding VgaeModel::encode(Var x, Var ahat, Rng& rng) {
  Heads hd = heads(x, ahat);
  if (!x.tape().training()) return {hd.mu, hd.mu, hd.logvar};
  Tensor2 eps(hd.mu.rows(), hd.mu.cols());
  for (double& v : eps.data()) v = rng.normal();
  Var sigma = nn::exp(nn::scale(hd.logvar, 0.5));
  Var z = nn::add(hd.mu, nn::hadamard(sigma, x.tape().constant(std::move(eps))));
  return {z, hd.mu, hd.logvar};
}

VgaeEncoding VgaeModel::encode_with_noise(Var x, Var ahat, const Tensor2& eps) {
  Heads hd = heads(x, ahat);
  Var sigma = nn::exp(nn::scale(hd.logvar, 0.5));
  Var z = nn::add(hd.mu, nn::hadamard(sigma, x.tape().constant(eps)));
  return {z, hd.mu, hd.logvar};
}

nn::Checkpoint VgaeModel::to_checkpoint() const {
  nn::Checkpoint c;
  c.meta = {{"kind", "vgae"},
            {"in_features", in_features()},
            {"hidden", hidden()},
            {"embed_dim", embed_dim()},
            {"logvar_clamp", {kLogvarMin, kLogvarMax}}};
  c.add(w0_);
  c.add(w_mu_);
  c.add(w_logvar_);
  return c;
}

VgaeModel VgaeModel::from_checkpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.meta.value("kind", "") != "vgae") throw DataError("checkpoint is not a VGAE");
  Rng unused(0);
  VgaeModel m(ckpt.meta.at("in_features").get<std::size_t>(), ckpt.meta.at("hidden").get<std::size_t>(),
              ckpt.meta.at("embed_dim").get<std::size_t>(), unused);
  ckpt.restore(m.w0_);
  ckpt.restore(m.w_mu_);
  ckpt.restore(m.w_logvar_);
  return m;
}

Var inner_product_logits(Var z) { return nn::matmul(z, nn::transpose(z)); }

Var inner_product_decode(Var z) { return nn::sigmoid(inner_product_logits(z)); }

Tensor2 inner_product_decode(const Tensor2& z) {
  nn::Tape t(nn::Mode::kEval);
  Tensor2 m = inner_product_decode(t.constant(z)).value();
  // Z Z^T is symmetric in exact arithmetic but Eigen may round the two
  // triangles differently; mirror the upper triangle.
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
  return m;
}

Tensor2 off_diagonal_mask(std::size_t n) {
  Tensor2 m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

double positive_weight(const Tensor2& target) {
  double ones = 0, zeros = 0;
  for (std::size_t i = 0; i < target.rows(); ++i) {
    for (std::size_t j = 0; j < target.cols(); ++j) {
      if (i == j) continue;
      (target(i, j) != 0.0 ? ones : zeros) += 1.0;
    }
  }
  if (ones == 0.0) throw ConfigError("reconstruction target has no edges; positive weight undefined");
  return zeros / ones;
}

Var reconstruction_ce(Var probs, const Tensor2& target) {
  return reconstruction_ce(probs, target, positive_weight(target));
}

Var reconstruction_ce(Var probs, const Tensor2& target, double pos_weight) {
  return nn::bce_probs(probs, target, off_diagonal_mask(target.rows()), pos_weight);
}

Var reconstruction_ce_logits(Var logits, const Tensor2& target) {
  return reconstruction_ce_logits(logits, target, positive_weight(target));
}

Var reconstruction_ce_logits(Var logits, const Tensor2& target, double pos_weight) {
  return nn::bce_with_logits(logits, target, off_diagonal_mask(target.rows()), pos_weight);
}

Var kld(Var mu, Var logvar) {
  Var terms = nn::add_scalar(nn::sub(nn::add(nn::exp(logvar), nn::hadamard(mu, mu)), logvar), -1.0);
  return nn::scale(nn::sum(terms), 0.5 / static_cast<double>(mu.rows()));
}

namespace {

struct LossParts {
  double ce = 0;
  double kld = 0;
  double kld_weight = 0;
};

template <typename LossFn>
void record_eval(AutoencoderTrace& trace, std::span<const GraphInput> graphs, LossFn&& eval_loss, bool has_kld) {
  double ce = 0, raw_kld = 0, total = 0;
  for (const auto& g : graphs) {
    LossParts p = eval_loss(g);
    ce += p.ce;
    raw_kld += p.kld;
    total += p.ce + p.kld_weight * p.kld;
  }
  const double n = static_cast<double>(graphs.size());
  trace.ce.push_back(ce / n);
  if (has_kld) trace.kld.push_back(raw_kld / n);
  trace.total.push_back(total / n);
}

std::vector<std::size_t> epoch_order(std::size_t count, const Rng& rng, std::size_t epoch, bool shuffle) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle) {
    Rng r = rng.split({0x5348u, epoch});
    for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[r.uniform_int(i)]);
  }
  return order;
}

// Shared loop: per-graph tapes accumulate gradients, one Adagrad step per batch.
template <typename TrainLoss, typename EvalLoss>
AutoencoderTrace train_loop(std::vector<nn::Parameter*> params, std::span<const GraphInput> graphs,
                            const AutoencoderTrainConfig& cfg, bool has_kld, TrainLoss&& train_loss,
                            EvalLoss&& eval_loss) {
  if (graphs.empty()) throw ConfigError("autoencoder training needs at least one graph");
  nn::Adagrad opt(cfg.optimizer, std::move(params));
  const Rng root(cfg.seed);
  const std::size_t batch = cfg.batch_size == 0 ? graphs.size() : std::min(cfg.batch_size, graphs.size());
  AutoencoderTrace trace;
  record_eval(trace, graphs, eval_loss, has_kld);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto order = epoch_order(graphs.size(), root, epoch, batch < graphs.size());
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      opt.zero_grad();
      for (std::size_t k = start; k < stop; ++k) {
        const GraphInput& g = graphs[order[k]];
        Rng noise = root.split({epoch, order[k]});
        try {
          nn::Tape tape(nn::Mode::kTrain);
          Var loss = nn::scale(train_loss(tape, g, noise), 1.0 / static_cast<double>(stop - start));
          tape.backward(loss);
        } catch (const NumericalError& e) {
          throw NumericalError("autoencoder diverged at epoch " + std::to_string(epoch) + " on graph '" + g.id +
                               "': " + e.what());
        }
      }
      opt.step();
    }
    record_eval(trace, graphs, eval_loss, has_kld);
    if (!std::isfinite(trace.total.back())) {
      throw NumericalError("autoencoder loss non-finite after epoch " + std::to_string(epoch));
    }
  }
  return trace;
}

double kld_weight(const AutoencoderTrainConfig& cfg, const GraphInput& g) {
  return cfg.kld_weight.value_or(1.0 / static_cast<double>(g.graph.size()));
}

}  // namespace

AutoencoderTrace train_vgae(VgaeModel& model, std::span<const GraphInput> graphs, const AutoencoderTrainConfig& cfg) {
  auto train_loss = [&](nn::Tape& t, const GraphInput& g, Rng& noise) {
    VgaeEncoding enc = model.encode(t.constant(g.features), t.constant(g.graph.ahat), noise);
    return nn::add(reconstruction_ce_logits(inner_product_logits(enc.z), g.graph.adjacency),
                   nn::scale(kld(enc.mu, enc.logvar), kld_weight(cfg, g)));
  };
  auto eval_loss = [&](const GraphInput& g) {
    nn::Tape t(nn::Mode::kEval);
    Rng unused(0);
    VgaeEncoding enc = model.encode(t.constant(g.features), t.constant(g.graph.ahat), unused);
    return LossParts{reconstruction_ce_logits(inner_product_logits(enc.z), g.graph.adjacency).value().item(),
                     kld(enc.mu, enc.logvar).value().item(), kld_weight(cfg, g)};
  };
  return train_loop(model.parameters(), graphs, cfg, true, train_loss, eval_loss);
}

AutoencoderTrace train_gae(GaeModel& model, std::span<const GraphInput> graphs, const AutoencoderTrainConfig& cfg) {
  auto train_loss = [&](nn::Tape& t, const GraphInput& g, Rng&) {
    Var z = model.encode(t.constant(g.features), t.constant(g.graph.ahat));
    return reconstruction_ce_logits(inner_product_logits(z), g.graph.adjacency);
  };
  auto eval_loss = [&](const GraphInput& g) {
    nn::Tape t(nn::Mode::kEval);
    Var z = model.encode(t.constant(g.features), t.constant(g.graph.ahat));
    return LossParts{reconstruction_ce_logits(inner_product_logits(z), g.graph.adjacency).value().item(), 0.0, 0.0};
  };
  return train_loop(model.parameters(), graphs, cfg, false, train_loss, eval_loss);
}

}  // namespace auginf::ae
