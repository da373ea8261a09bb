#include "auginf/augment/augment.hpp"

#include "auginf/error.hpp"

namespace auginf::aug {

void AugmentationConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("augmentation threshold must be in [0, 1], got " + std::to_string(threshold));
  }
}

EdgeProbMatrix edge_probabilities(const graph::EgoSample& sample, const nn::Tensor2& features, ae::VgaeModel& vgae,
                                  std::string checkpoint_id) {
  if (features.cols() != vgae.in_features() || features.rows() != sample.size()) {
    throw DimensionError("edge_probabilities: features " + features.shape_str() + " for " +
                         std::to_string(sample.size()) + " nodes, encoder expects width " +
                         std::to_string(vgae.in_features()));
  }
  nn::Tape t(nn::Mode::kEval);
  const gnn::GraphTensors g = gnn::GraphTensors::from_adjacency(sample.graph.adjacency_matrix());
  Rng unused(0);
  const ae::VgaeEncoding enc = vgae.encode(t.constant(features), t.constant(g.ahat), unused);
  return {ae::inner_product_decode(enc.mu.value()), std::move(checkpoint_id), sample.id};
}

std::vector<graph::Edge> candidate_edges(const EdgeProbMatrix& m, const graph::UndirectedGraph& g, double threshold) {
  if (m.size() != g.size()) {
    throw DimensionError("candidate_edges: " + std::to_string(m.size()) + "-node probabilities for a " +
                         std::to_string(g.size()) + "-node graph");
  }
  std::vector<graph::Edge> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (!g.has_edge(i, j) && m(i, j) > threshold) out.emplace_back(i, j);
    }
  }
  return out;
}

graph::EgoSample sample_augmentation(const graph::EgoSample& sample, std::span<const graph::Edge> candidates,
                                     const EdgeProbMatrix& m, const Rng& stream) {
  graph::EgoSample out = sample;
  const std::size_t n = sample.size();
  for (const auto& [i, j] : candidates) {
    if (stream.uniform_at(i * n + j) < m(i, j)) out.graph.add_edge(i, j);
  }
  return out;
}

Rng augmentation_stream(std::uint64_t master_seed, const std::string& sample_id, std::size_t k) {
  return Rng(master_seed).split({0x617567u, hash_tag(sample_id.data(), sample_id.size()), k});
}

std::string augmentation_id(const std::string& sample_id, std::size_t k) {
  return sample_id + "/aug" + std::to_string(k);
}

std::vector<graph::EgoSample> generate_augmentations(const graph::EgoSample& sample, const EdgeProbMatrix& m,
                                                     const AugmentationConfig& cfg) {
  cfg.validate();
  std::vector<graph::EgoSample> out;
  if (cfg.count == 0) return out;
  const auto candidates = candidate_edges(m, sample.graph, cfg.threshold);
  out.reserve(cfg.count);
  for (std::size_t k = 1; k <= cfg.count; ++k) {
    out.push_back(sample_augmentation(sample, candidates, m, augmentation_stream(cfg.seed, sample.id, k)));
    out.back().id = augmentation_id(sample.id, k);
  }
  return out;
}

std::vector<graph::EgoSample> generate_augmentations(const graph::EgoSample& sample, const nn::Tensor2& features,
                                                     ae::VgaeModel& vgae, const AugmentationConfig& cfg) {
  return generate_augmentations(sample, edge_probabilities(sample, features, vgae), cfg);
}

}  // namespace auginf::aug
