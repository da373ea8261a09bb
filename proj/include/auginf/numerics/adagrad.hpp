#pragma once

#include "auginf/numerics/tape.hpp"

#include <vector>

namespace auginf::nn {

struct AdagradConfig {
  double learning_rate = 0.05;
  double weight_decay = 5e-4;
  double epsilon = 1e-10;
};

/// Single Adagrad update for one matrix. Weight decay is folded into the
/// gradient (g + lambda * p) before it is accumulated.
void adagrad_update(Tensor2& param, const Tensor2& grad, Tensor2& accumulator, const AdagradConfig& cfg);

/// Adagrad over a fixed parameter list; one accumulator per parameter.
class Adagrad {
 public:
  Adagrad(AdagradConfig cfg, std::vector<Parameter*> params);

  /// Applies the update from each parameter's current `grad`.
  void step();
  void zero_grad();

  const AdagradConfig& config() const { return cfg_; }
  const std::vector<Parameter*>& params() const { return params_; }
  const std::vector<Tensor2>& accumulators() const { return acc_; }

 private:
  AdagradConfig cfg_;
  std::vector<Parameter*> params_;
  std::vector<Tensor2> acc_;
};

}  // namespace auginf::nn
