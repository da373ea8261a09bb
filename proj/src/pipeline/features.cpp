#include "auginf/pipeline/features.hpp"

#include "auginf/error.hpp"

namespace auginf::pipeline {

nn::Tensor2 influence_features(const graph::EgoSample& s) {
  if (s.state.size() != s.size() || s.ego >= s.size()) {
    throw ValidationError(s.id, "influence_features: state length or ego does not match the graph");
  }
  nn::Tensor2 f(s.size(), 2);
  for (std::size_t i = 0; i < s.size(); ++i) f(i, 0) = s.state[i] ? 1.0 : 0.0;
  f(s.ego, 1) = 1.0;
  return f;
}

nn::Tensor2 fixed_features(const graph::EgoSample& s, const nn::Tensor2& deepwalk) {
  if (deepwalk.rows() != s.size()) {
    throw DimensionError("fixed_features: deepwalk " + deepwalk.shape_str() + " for " + std::to_string(s.size()) +
                         " nodes");
  }
  const nn::Tensor2 inf = influence_features(s);
  if (deepwalk.cols() == 0) return inf;
  nn::Matrix m(s.size(), 2 + deepwalk.cols());
  m << inf.mat(), deepwalk.mat();
  return nn::Tensor2(std::move(m));
}

}  // namespace auginf::pipeline
