#pragma once

#include "auginf/graph/graph.hpp"
#include "auginf/numerics/rng.hpp"
#include "auginf/numerics/tensor.hpp"

#include <utility>
#include <vector>

namespace auginf::pipeline {

struct DeepWalkConfig {
  std::size_t dim = 64;
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 40;
  std::size_t window = 5;
  std::size_t negatives = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 * learning_rate

  /// Throws ConfigError on a zero dimension, walk length or window.
  void validate() const;
};

/// Uniform random walks, `walks_per_node` starting at every node. A walk
/// stops early at a node with no neighbours.
std::vector<std::vector<std::size_t>> random_walks(const graph::UndirectedGraph& g, std::size_t walks_per_node,
                                                   std::size_t walk_length, Rng& rng);

/// (center, context) pairs for every position and every offset up to `window`.
std::vector<std::pair<std::size_t, std::size_t>> skipgram_pairs(const std::vector<std::size_t>& walk,
                                                                std::size_t window);

/// Skip-gram with negative sampling over random walks. Negatives are drawn
/// from the walk unigram distribution raised to 0.75. Returns the input
/// vectors, n x dim.
nn::Tensor2 deepwalk_embed(const graph::UndirectedGraph& g, const DeepWalkConfig& cfg, Rng& rng);

}  // namespace auginf::pipeline
