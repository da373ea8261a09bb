#pragma once

#include "auginf/numerics/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <optional>
#include <vector>

namespace auginf::graph {

using Edge = std::pair<std::size_t, std::size_t>;

/// Dense 0/1 adjacency over n nodes.
///
/// The type stores raw entries so that invalid inputs (asymmetric, nonzero
/// diagonal) can be represented and reported by `validate_sample` instead of
/// being silently repaired. `add_edge` is the normal way to build a graph and
/// always keeps the matrix symmetric.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

  static UndirectedGraph from_edges(std::size_t n, const std::vector<Edge>& edges);

  std::size_t size() const { return n_; }

  std::uint8_t at(std::size_t i, std::size_t j) const { return adj_[i * n_ + j]; }
  /// Sets a single directed entry; may break symmetry.
  void set(std::size_t i, std::size_t j, std::uint8_t v) { adj_[i * n_ + j] = v; }
  bool has_edge(std::size_t i, std::size_t j) const { return at(i, j) != 0; }
  void add_edge(std::size_t i, std::size_t j);

  /// Undirected edges (i < j) present in the upper triangle, sorted.
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;
  std::vector<std::size_t> neighbors(std::size_t i) const;

  nn::Tensor2 adjacency_matrix() const;

  /// Optional external identifiers, empty or one per node.
  std::vector<std::string> node_ids;

  friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_ && a.node_ids == b.node_ids;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Row sums of the adjacency matrix.
std::vector<std::size_t> degree_vector(const UndirectedGraph& g);

/// One ego subgraph with the neighbourhood's action status and the ego's label.
struct EgoSample {
  std::string id;
  UndirectedGraph graph;
  std::size_t ego = 0;
  std::vector<std::uint8_t> state;  // 1 if the node has taken the action
  std::uint8_t label = 0;           // 1 if the ego takes the action next

  std::size_t size() const { return graph.size(); }
  friend bool operator==(const EgoSample&, const EgoSample&) = default;
};

/// Human-readable invariant violations; empty iff the sample is valid.
std::vector<std::string> validate_sample(const EgoSample& s);

struct Splits {
  std::vector<std::size_t> train, valid, test;
  friend bool operator==(const Splits&, const Splits&) = default;
};

struct DatasetMeta {
  std::string source;
  std::uint64_t seed = 0;
  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

struct Dataset {
  std::vector<EgoSample> samples;
  Splits splits;
  DatasetMeta meta;
  /// The graph the samples were drawn from, when known. Sample node_ids
  /// then hold base-graph node indices.
  std::optional<UndirectedGraph> base;

  std::vector<EgoSample> subset(const std::vector<std::size_t>& indices) const;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Sample-level violations (prefixed with the sample id), split overlap,
/// out-of-range split indices and mixed subgraph sizes.
std::vector<std::string> validate_dataset(const Dataset& d);

}  // namespace auginf::graph
