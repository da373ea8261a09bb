#include "auginf/numerics/adagrad.hpp"

#include "auginf/error.hpp"

#include <cmath>

namespace auginf::nn {

void adagrad_update(Tensor2& param, const Tensor2& grad, Tensor2& accumulator, const AdagradConfig& cfg) {
  require_same_shape(param, grad, "adagrad_update");
  require_same_shape(param, accumulator, "adagrad_update");
  auto p = param.data();
  auto g = grad.data();
  auto acc = accumulator.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double gi = g[i] + cfg.weight_decay * p[i];
    acc[i] += gi * gi;
    p[i] -= cfg.learning_rate * gi / (std::sqrt(acc[i]) + cfg.epsilon);
  }
}

Adagrad::Adagrad(AdagradConfig cfg, std::vector<Parameter*> params) : cfg_(cfg), params_(std::move(params)) {
  if (!(cfg_.learning_rate >= 0.0)) throw ConfigError("adagrad: learning rate must be >= 0");
  if (!(cfg_.weight_decay >= 0.0)) throw ConfigError("adagrad: weight decay must be >= 0");
  acc_.reserve(params_.size());
  for (Parameter* p : params_) acc_.emplace_back(p->value.rows(), p->value.cols());
}

void Adagrad::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    adagrad_update(params_[i]->value, params_[i]->grad, acc_[i], cfg_);
  }
}

void Adagrad::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace auginf::nn
