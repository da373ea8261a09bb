#include "auginf/graph/graph.hpp"

#include "auginf/error.hpp"

#include <set>

namespace auginf::graph {

UndirectedGraph UndirectedGraph::from_edges(std::size_t n, const std::vector<Edge>& edges) {
  UndirectedGraph g(n);
  for (const auto& [i, j] : edges) g.add_edge(i, j);
  return g;
}

void UndirectedGraph::add_edge(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) {
    throw DataError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range for n=" +
                    std::to_string(n_));
  }
  set(i, j, 1);
  set(j, i, 1);
}

std::vector<Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) c += has_edge(i, j);
  }
  return c;
}

std::vector<std::size_t> UndirectedGraph::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j) {
    if (j != i && has_edge(i, j)) out.push_back(j);
  }
  return out;
}

nn::Tensor2 UndirectedGraph::adjacency_matrix() const {
  nn::Tensor2 a(n_, n_);
  for (std::size_t k = 0; k < adj_.size(); ++k) a.data()[k] = adj_[k];
  return a;
}

std::vector<std::size_t> degree_vector(const UndirectedGraph& g) {
  std::vector<std::size_t> deg(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) deg[i] += g.at(i, j);
  }
  return deg;
}

std::vector<std::string> validate_sample(const EgoSample& s) {
  std::vector<std::string> v;
  const std::size_t n = s.graph.size();
  if (n == 0) v.push_back("empty graph");
  if (s.ego >= n) v.push_back("ego out of range");
  if (s.state.size() != n) {
    v.push_back("state length " + std::to_string(s.state.size()) + " != n " + std::to_string(n));
  }
  for (std::size_t i = 0; i < s.state.size(); ++i) {
    if (s.state[i] > 1) v.push_back("state value not in {0,1} at " + std::to_string(i));
  }
  if (s.label > 1) v.push_back("label not in {0,1}");
  if (!s.graph.node_ids.empty() && s.graph.node_ids.size() != n) v.push_back("node_ids length != n");
  for (std::size_t i = 0; i < n; ++i) {
    if (s.graph.at(i, i) != 0) v.push_back("nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (s.graph.at(i, j) > 1) {
        v.push_back("entry not in {0,1} at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (j > i && s.graph.at(i, j) != s.graph.at(j, i)) {
        v.push_back("non-symmetric adjacency at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return v;
}

std::vector<EgoSample> Dataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<EgoSample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(samples.at(i));
  return out;
}

std::vector<std::string> validate_dataset(const Dataset& d) {
  std::vector<std::string> v;
  for (const auto& s : d.samples) {
    for (auto& msg : validate_sample(s)) v.push_back(s.id + ": " + msg);
    if (s.size() != d.samples.front().size()) {
      v.push_back(s.id + ": size " + std::to_string(s.size()) + " differs from " +
                  std::to_string(d.samples.front().size()));
    }
  }
  std::set<std::size_t> seen;
  const auto check = [&](const std::vector<std::size_t>& part, const char* name) {
    for (std::size_t i : part) {
      if (i >= d.samples.size()) v.push_back(std::string(name) + " split index " + std::to_string(i) + " out of range");
      if (!seen.insert(i).second) v.push_back(std::string(name) + " split index " + std::to_string(i) + " overlaps");
    }
  };
  check(d.splits.train, "train");
  check(d.splits.valid, "valid");
  check(d.splits.test, "test");
  return v;
}

}  // namespace auginf::graph
