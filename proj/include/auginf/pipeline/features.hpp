#pragma once

#include "auginf/graph/graph.hpp"
#include "auginf/numerics/tensor.hpp"

namespace auginf::pipeline {

/// n x 2: column 0 is the node's action state, column 1 marks the ego.
nn::Tensor2 influence_features(const graph::EgoSample& s);

/// Column widths of the per-node input to the prediction head, laid out as
/// [gae embedding | influence | deepwalk].
struct FeatureWidths {
  std::size_t gae = 0;
  std::size_t influence = 2;
  std::size_t deepwalk = 0;

  std::size_t total() const { return gae + influence + deepwalk; }
  /// Width of the part that does not depend on the GAE.
  std::size_t fixed() const { return influence + deepwalk; }
};

/// [influence | deepwalk], the input to both autoencoders.
nn::Tensor2 fixed_features(const graph::EgoSample& s, const nn::Tensor2& deepwalk);

}  // namespace auginf::pipeline
