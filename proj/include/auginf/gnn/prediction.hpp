#pragma once

#include "auginf/gnn/layers.hpp"
#include "auginf/numerics/checkpoint.hpp"

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace auginf::gnn {

enum class HeadKind { kGat, kGcn };

const char* to_string(HeadKind k);
HeadKind head_kind_from_string(const std::string& s);

struct PredictionConfig {
  HeadKind kind = HeadKind::kGat;
  std::size_t in_features = 0;
  std::vector<std::size_t> hidden = {128, 128};
  std::size_t classes = 2;
  std::size_t heads = 8;         // per hidden GAT layer; hidden widths must divide evenly
  std::size_t output_heads = 8;  // averaged in the output GAT layer
  double dropout = 0.2;          // applied to every layer input
  double leaky_slope = 0.2;
};

/// Stack of GAT or GCN layers ending in `classes` logits per node. Hidden
/// layers use ELU; the output layer is linear.
class PredictionNet {
 public:
  PredictionNet(const PredictionConfig& cfg, Rng& rng);

  /// n x classes logits. `dropout_rng` is only drawn from on a train tape.
  nn::Var forward(nn::Var x, const GraphTensors& g, nn::Var ahat, Rng& dropout_rng);

  const PredictionConfig& config() const { return cfg_; }
  /// Throws ConfigError unless 0 <= p < 1.
  void set_dropout(double p);
  std::vector<nn::Parameter*> parameters();

  void save(nn::Checkpoint& ckpt) const;
  void load(const nn::Checkpoint& ckpt);

 private:
  PredictionConfig cfg_;
  std::vector<std::variant<GcnLayer, GatLayer>> layers_;
};

/// -log softmax(logits[ego])[label]. Throws ContractError if ego or label is
/// out of range.
nn::Var ego_nll(nn::Var logits, std::size_t ego, std::size_t label);

/// softmax(logits[ego]) as plain numbers.
std::vector<double> ego_probabilities(const nn::Tensor2& logits, std::size_t ego);

}  // namespace auginf::gnn
