#include "auginf/gnn/prediction.hpp"

#include "auginf/error.hpp"

#include <cmath>

namespace auginf::gnn {

const char* to_string(HeadKind k) { return k == HeadKind::kGat ? "gat" : "gcn"; }

HeadKind head_kind_from_string(const std::string& s) {
  if (s == "gat") return HeadKind::kGat;
  if (s == "gcn") return HeadKind::kGcn;
  throw ConfigError("unknown model '" + s + "' (expected gat or gcn)");
}

PredictionNet::PredictionNet(const PredictionConfig& cfg, Rng& rng) : cfg_(cfg) {
  if (cfg.in_features == 0 || cfg.classes == 0) throw ConfigError("PredictionNet: empty input or output");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) throw ConfigError("PredictionNet: dropout must be in [0,1)");
  std::size_t in = cfg.in_features;
  for (std::size_t l = 0; l <= cfg.hidden.size(); ++l) {
    const bool last = l == cfg.hidden.size();
    const std::size_t out = last ? cfg.classes : cfg.hidden[l];
    const std::string name = "head.l" + std::to_string(l);
    const Activation act = last ? Activation::kIdentity : Activation::kElu;
    if (cfg.kind == HeadKind::kGcn) {
      layers_.emplace_back(std::in_place_type<GcnLayer>, name + ".w", in, out, act, rng);
    } else if (last) {
      layers_.emplace_back(std::in_place_type<GatLayer>, name, in, out, cfg.output_heads, false, act,
                           cfg.leaky_slope, rng);
    } else {
      if (cfg.heads == 0 || out % cfg.heads != 0) {
        throw ConfigError("PredictionNet: hidden width " + std::to_string(out) + " not divisible by " +
                          std::to_string(cfg.heads) + " heads");
      }
      layers_.emplace_back(std::in_place_type<GatLayer>, name, in, out / cfg.heads, cfg.heads, true, act,
                           cfg.leaky_slope, rng);
    }
    in = out;
  }
}

nn::Var PredictionNet::forward(nn::Var x, const GraphTensors& g, nn::Var ahat, Rng& dropout_rng) {
  if (x.cols() != cfg_.in_features) {
    throw DimensionError("PredictionNet: input " + x.value().shape_str() + " vs expected width " +
                         std::to_string(cfg_.in_features));
  }
  nn::Var h = x;
  for (auto& layer : layers_) {
    h = nn::dropout(h, cfg_.dropout, dropout_rng);
    h = std::visit(
        [&](auto& l) -> nn::Var {
          if constexpr (std::is_same_v<std::decay_t<decltype(l)>, GcnLayer>) {
            return l.forward(h, ahat);
          } else {
            return l.forward(h, g.mask);
          }
        },
        layer);
  }
  return h;
}

void PredictionNet::set_dropout(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("PredictionNet: dropout must be in [0,1)");
  cfg_.dropout = p;
}

std::vector<nn::Parameter*> PredictionNet::parameters() {
  std::vector<nn::Parameter*> out;
  for (auto& layer : layers_) {
    std::visit(
        [&](auto& l) {
          for (auto* p : l.parameters()) out.push_back(p);
        },
        layer);
  }
  return out;
}

void PredictionNet::save(nn::Checkpoint& ckpt) const {
  for (auto* p : const_cast<PredictionNet*>(this)->parameters()) ckpt.add(*p);
}

void PredictionNet::load(const nn::Checkpoint& ckpt) {
  for (auto* p : parameters()) ckpt.restore(*p);
}

nn::Var ego_nll(nn::Var logits, std::size_t ego, std::size_t label) {
  if (ego >= logits.rows()) {
    throw ContractError("ego_nll: ego " + std::to_string(ego) + " out of range for " +
                        std::to_string(logits.rows()) + " nodes");
  }
  if (label >= logits.cols()) throw ContractError("ego_nll: label out of range");
  nn::Var row = nn::slice(logits, ego, 1, 0, logits.cols());
  return nn::scale(nn::slice(nn::log_softmax_rows(row), 0, 1, label, 1), -1.0);
}

std::vector<double> ego_probabilities(const nn::Tensor2& logits, std::size_t ego) {
  if (ego >= logits.rows()) throw ContractError("ego_probabilities: ego out of range");
  const auto row = logits.mat().row(ego);
  const double mx = row.maxCoeff();
  std::vector<double> p(logits.cols());
  double z = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) z += p[c] = std::exp(row(c) - mx);
  for (double& v : p) v /= z;
  return p;
}

}  // namespace auginf::gnn
