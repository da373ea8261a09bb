#pragma once

#include "auginf/graph/graph.hpp"
#include "auginf/numerics/rng.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace auginf::cli {

/// Activation step of every node under the independent cascade: seeds are
/// step 0, a node first activated by a step-t node is step t + 1, and -1
/// means never active. Each newly active node tries each inactive neighbour
/// once with probability p.
std::vector<int> timed_cascade(const graph::UndirectedGraph& g, const std::vector<std::size_t>& seeds, double p,
                               Rng& rng);

/// Final active set, ascending.
std::vector<std::size_t> independent_cascade(const graph::UndirectedGraph& g, const std::vector<std::size_t>& seeds,
                                             double p, Rng& rng);

/// Ring lattice with k nearest neighbours (k even), each edge rewired with
/// probability beta.
graph::UndirectedGraph watts_strogatz(std::size_t n, std::size_t k, double beta, Rng& rng);

/// Preferential attachment, m edges per new node.
graph::UndirectedGraph barabasi_albert(std::size_t n, std::size_t m, Rng& rng);

enum class BaseGraph { kSmallWorld, kPreferential };

struct CascadeConfig {
  BaseGraph graph = BaseGraph::kSmallWorld;
  std::size_t nodes = 300;
  std::size_t ws_k = 6;
  double ws_beta = 0.1;
  std::size_t ba_m = 3;
  std::size_t seed_set = 10;
  double p = 0.15;
  std::size_t samples = 500;
  std::size_t n_target = 30;
  double rwr_restart = 0.8;
  double frontier_share = 0.7;  // chance an ego is drawn next to the active set
  std::uint64_t seed = 0;

  /// Throws ConfigError on p outside [0, 1], an empty seed set, or a
  /// subgraph larger than the base graph.
  void validate() const;
  nlohmann::json to_json() const;
  static CascadeConfig from_json(const nlohmann::json& j);
};

/// Synthetic influence dataset. For each sample a clustered seed set starts
/// a timed cascade; the state is the set active at step 0 and the label is
/// whether the ego activates at step 1. Egos are drawn from inactive nodes
/// adjacent to the active set (with probability frontier_share) or two hops
/// away. Each sample is the RWR subgraph around its ego; samples whose walk
/// falls short of n_target are redrawn. Splits are stratified 75/12.5/12.5.
/// Throws ConfigError if only one class is produced.
graph::Dataset synthesize(const CascadeConfig& cfg);

/// Stratified split of sample indices into 75/12.5/12.5 per class.
graph::Splits stratified_split(const std::vector<graph::EgoSample>& samples, Rng& rng);

}  // namespace auginf::cli
