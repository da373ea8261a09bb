#pragma once

#include "auginf/autoenc/autoencoder.hpp"
#include "auginf/graph/graph.hpp"

#include <span>
#include <string>
#include <vector>

namespace auginf::aug {

/// Decoded edge probabilities for one sample. Symmetric; the diagonal is
/// never read.
struct EdgeProbMatrix {
  nn::Tensor2 probs;
  std::string checkpoint_id;
  std::string sample_id;

  std::size_t size() const { return probs.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return probs(i, j); }
};

struct AugmentationConfig {
  double threshold = 0.8;
  std::size_t count = 3;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless threshold is in [0, 1].
  void validate() const;
};

/// sigmoid(mu mu^T) from an eval-mode pass. Throws DimensionError if the
/// feature width does not match the encoder.
EdgeProbMatrix edge_probabilities(const graph::EgoSample& sample, const nn::Tensor2& features, ae::VgaeModel& vgae,
                                  std::string checkpoint_id = {});

/// Non-edges (i < j) with probability strictly above `threshold`, in row-major order.
std::vector<graph::Edge> candidate_edges(const EdgeProbMatrix& m, const graph::UndirectedGraph& g, double threshold);

/// Adds each candidate (i, j) independently with probability M_ij. The draw
/// for a pair is `stream.uniform_at(i * n + j)`, so a pair's outcome does not
/// depend on which other pairs are candidates.
graph::EgoSample sample_augmentation(const graph::EgoSample& sample, std::span<const graph::Edge> candidates,
                                     const EdgeProbMatrix& m, const Rng& stream);

/// Stream for augmentation k (1-based) of `sample_id`.
Rng augmentation_stream(std::uint64_t master_seed, const std::string& sample_id, std::size_t k);

/// "<id>/aug<k>"
std::string augmentation_id(const std::string& sample_id, std::size_t k);

/// cfg.count augmented copies, each on its own stream.
std::vector<graph::EgoSample> generate_augmentations(const graph::EgoSample& sample, const EdgeProbMatrix& m,
                                                     const AugmentationConfig& cfg);
std::vector<graph::EgoSample> generate_augmentations(const graph::EgoSample& sample, const nn::Tensor2& features,
                                                     ae::VgaeModel& vgae, const AugmentationConfig& cfg);

}  // namespace auginf::aug
