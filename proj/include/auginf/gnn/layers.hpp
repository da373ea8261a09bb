#pragma once

#include "auginf/numerics/ops.hpp"
#include "auginf/numerics/rng.hpp"
#include "auginf/numerics/tape.hpp"

#include <string>
#include <vector>

namespace auginf::gnn {

/// D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of A + I.
/// Throws DataError if A is not square, symmetric and zero-diagonal.
nn::Tensor2 normalized_adjacency(const nn::Tensor2& adjacency);

/// A + I as a 0/1 mask: the set each node attends over.
nn::Tensor2 attention_mask(const nn::Tensor2& adjacency);

/// Precomputed per-graph matrices shared by every layer that sees the graph.
struct GraphTensors {
  nn::Tensor2 adjacency;  // raw 0/1, zero diagonal
  nn::Tensor2 ahat;       // normalized_adjacency(adjacency)
  nn::Tensor2 mask;       // attention_mask(adjacency)

  static GraphTensors from_adjacency(nn::Tensor2 adjacency);
  std::size_t size() const { return adjacency.rows(); }
};

enum class Activation { kIdentity, kRelu, kElu };

nn::Var activate(nn::Var x, Activation act);

/// Glorot-uniform matrix.
nn::Tensor2 glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng);

/// act(Ahat * H * W)
class GcnLayer {
 public:
  GcnLayer(std::string name, std::size_t in, std::size_t out, Activation act, Rng& rng);

  nn::Var forward(nn::Var h, nn::Var ahat);

  std::size_t in_features() const { return weight_.value.rows(); }
  std::size_t out_features() const { return weight_.value.cols(); }
  nn::Parameter& weight() { return weight_; }
  std::vector<nn::Parameter*> parameters() { return {&weight_}; }

 private:
  nn::Parameter weight_;
  Activation act_;
};

/// Multi-head graph attention.
///
/// Head k scores e_ij = LeakyReLU(a_k^T [W_k h_i || W_k h_j]) over j in
/// N(i) + {i}, normalizes with a masked row softmax and aggregates W_k h_j.
/// Hidden layers concatenate heads (K * F' columns); an output layer averages
/// them (F' columns). The activation is applied after concatenation or after
/// the average respectively.
class GatLayer {
 public:
  GatLayer(std::string name, std::size_t in, std::size_t per_head, std::size_t heads, bool concat, Activation act,
           double leaky_slope, Rng& rng);

  nn::Var forward(nn::Var h, const nn::Tensor2& mask);
  /// Attention matrices, one n x n per head.
  std::vector<nn::Var> attention(nn::Var h, const nn::Tensor2& mask);

  std::size_t heads() const { return heads_; }
  std::size_t per_head() const { return per_head_; }
  std::size_t out_features() const { return concat_ ? heads_ * per_head_ : per_head_; }
  nn::Parameter& weight() { return weight_; }
  nn::Parameter& attn() { return attn_; }
  std::vector<nn::Parameter*> parameters() { return {&weight_, &attn_}; }

 private:
  struct HeadOut {
    nn::Var alpha;
    nn::Var wh;
  };
  std::vector<HeadOut> heads_forward(nn::Var h, const nn::Tensor2& mask);

  nn::Parameter weight_;  // in x (K * F'), head k owns columns [k F', (k+1) F')
  nn::Parameter attn_;    // K x 2F', row k = [a_src || a_dst]
  std::size_t heads_;
  std::size_t per_head_;
  bool concat_;
  Activation act_;
  double slope_;
};

}  // namespace auginf::gnn
