#include "auginf/gnn/layers.hpp"

#include "auginf/error.hpp"

#include <cmath>

namespace auginf::gnn {

using nn::Tensor2;
using nn::Var;

nn::Tensor2 normalized_adjacency(const nn::Tensor2& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("normalized_adjacency: non-square " + a.shape_str());
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) throw DataError("normalized_adjacency: nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (a(i, j) != a(j, i)) throw DataError("normalized_adjacency: asymmetric input");
    }
  }
  Tensor2 out(n, n);
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 1.0;
    for (std::size_t j = 0; j < n; ++j) d += a(i, j);
    inv_sqrt[i] = 1.0 / std::sqrt(d);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = (i == j) ? 1.0 : a(i, j);
      out(i, j) = aij * inv_sqrt[i] * inv_sqrt[j];
    }
  }
  return out;
}

nn::Tensor2 attention_mask(const nn::Tensor2& a) {
  Tensor2 m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = (i == j || a(i, j) != 0.0) ? 1.0 : 0.0;
  }
  return m;
}

GraphTensors GraphTensors::from_adjacency(nn::Tensor2 adjacency) {
  GraphTensors g;
  g.ahat = normalized_adjacency(adjacency);
  g.mask = attention_mask(adjacency);
  g.adjacency = std::move(adjacency);
  return g;
}

nn::Var activate(nn::Var x, Activation act) {
  switch (act) {
    case Activation::kRelu:
      return nn::relu(x);
    case Activation::kElu:
      return nn::elu(x, 1.0);
    case Activation::kIdentity:
      break;
  }
  return x;
}

nn::Tensor2 glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor2 w(fan_in, fan_out);
  for (double& v : w.data()) v = rng.uniform(-limit, limit);
  return w;
}

GcnLayer::GcnLayer(std::string name, std::size_t in, std::size_t out, Activation act, Rng& rng)
    : weight_(std::move(name), glorot(in, out, rng)), act_(act) {}

nn::Var GcnLayer::forward(nn::Var h, nn::Var ahat) {
  Var w = h.tape().param(weight_);
  return activate(nn::matmul(ahat, nn::matmul(h, w)), act_);
}

GatLayer::GatLayer(std::string name, std::size_t in, std::size_t per_head, std::size_t heads, bool concat,
                   Activation act, double leaky_slope, Rng& rng)
    : weight_(name + ".w", Tensor2(in, heads * per_head)),
      attn_(name + ".attn", Tensor2(heads, 2 * per_head)),
      heads_(heads),
      per_head_(per_head),
      concat_(concat),
      act_(act),
      slope_(leaky_slope) {
  if (heads == 0 || per_head == 0) throw ConfigError("GatLayer: heads and per-head width must be positive");
  for (std::size_t k = 0; k < heads; ++k) {
    weight_.value.mat().middleCols(k * per_head, per_head) = glorot(in, per_head, rng).mat();
    attn_.value.mat().row(k) = glorot(2 * per_head, 1, rng).mat().transpose();
  }
}

std::vector<GatLayer::HeadOut> GatLayer::heads_forward(nn::Var h, const nn::Tensor2& mask) {
  nn::Tape& t = h.tape();
  const std::size_t n = h.rows();
  if (mask.rows() != n || mask.cols() != n) {
    throw DimensionError("GatLayer: mask " + mask.shape_str() + " vs features " + h.value().shape_str());
  }
  Var w = t.param(weight_);
  Var a = t.param(attn_);
  Var hw = nn::matmul(h, w);
  Var ones_col = t.constant(Tensor2(n, 1, 1.0));
  Var ones_row = t.constant(Tensor2(1, n, 1.0));

  std::vector<HeadOut> out;
  out.reserve(heads_);
  for (std::size_t k = 0; k < heads_; ++k) {
    Var wh = nn::slice(hw, 0, n, k * per_head_, per_head_);
    Var a_src = nn::transpose(nn::slice(a, k, 1, 0, per_head_));
    Var a_dst = nn::transpose(nn::slice(a, k, 1, per_head_, per_head_));
    Var s = nn::matmul(wh, a_src);  // n x 1, score of the attending node
    Var d = nn::matmul(wh, a_dst);  // n x 1, score of the attended node
    Var e = nn::add(nn::matmul(s, ones_row), nn::matmul(ones_col, nn::transpose(d)));
    Var alpha = nn::row_softmax_masked(nn::leaky_relu(e, slope_), mask);
    out.push_back({alpha, wh});
  }
  return out;
}

std::vector<nn::Var> GatLayer::attention(nn::Var h, const nn::Tensor2& mask) {
  std::vector<Var> alphas;
  for (auto& ho : heads_forward(h, mask)) alphas.push_back(ho.alpha);
  return alphas;
}

nn::Var GatLayer::forward(nn::Var h, const nn::Tensor2& mask) {
  const auto hs = heads_forward(h, mask);
  std::vector<Var> outs;
  outs.reserve(hs.size());
  for (const auto& ho : hs) outs.push_back(nn::matmul(ho.alpha, ho.wh));
  if (concat_) return activate(nn::concat_cols(outs), act_);
  Var acc = outs.front();
  for (std::size_t k = 1; k < outs.size(); ++k) acc = nn::add(acc, outs[k]);
  return activate(nn::scale(acc, 1.0 / static_cast<double>(outs.size())), act_);
}

}  // namespace auginf::gnn
