#pragma once

#include "auginf/graph/graph.hpp"
#include "auginf/numerics/rng.hpp"

#include <vector>

namespace auginf::pipeline {

struct RwrResult {
  /// Induced subgraph; ego, state and label are filled in by the caller
  /// except `ego`, which indexes the ego's row.
  graph::EgoSample sample;
  /// Base-graph id of each subgraph row, ascending.
  std::vector<std::size_t> nodes;
  /// The step cap expired before n_target distinct nodes were visited.
  bool truncated = false;
};

/// Random walk with restart from `ego`, collecting distinct nodes until
/// `n_target` are seen or 50 * n_target steps have been taken. A walker at a
/// node without neighbours restarts.
RwrResult rwr_sample(const graph::UndirectedGraph& g, std::size_t ego, std::size_t n_target, double restart_p, Rng& rng);

/// Subgraph induced by `nodes` (base ids). Row k of the result is nodes[k].
graph::UndirectedGraph induced_subgraph(const graph::UndirectedGraph& g, const std::vector<std::size_t>& nodes);

}  // namespace auginf::pipeline
