#include "auginf/pipeline/sampling.hpp"

#include "auginf/error.hpp"

#include <algorithm>
#include <set>

namespace auginf::pipeline {

graph::UndirectedGraph induced_subgraph(const graph::UndirectedGraph& g, const std::vector<std::size_t>& nodes) {
  graph::UndirectedGraph sub(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (g.has_edge(nodes[a], nodes[b])) sub.add_edge(a, b);
    }
  }
  sub.node_ids.reserve(nodes.size());
  for (std::size_t v : nodes) sub.node_ids.push_back(std::to_string(v));
  return sub;
}

RwrResult rwr_sample(const graph::UndirectedGraph& g, std::size_t ego, std::size_t n_target, double restart_p,
                     Rng& rng) {
  if (ego >= g.size()) throw ContractError("rwr_sample: ego " + std::to_string(ego) + " not in graph");
  if (n_target == 0) throw ConfigError("rwr_sample: n_target must be positive");
  if (!(restart_p >= 0.0 && restart_p <= 1.0)) throw ConfigError("rwr_sample: restart probability outside [0, 1]");

  std::set<std::size_t> seen{ego};
  std::size_t cur = ego;
  const std::size_t cap = 50 * n_target;
  for (std::size_t step = 0; step < cap && seen.size() < std::min(n_target, g.size()); ++step) {
    if (rng.uniform() < restart_p) {
      cur = ego;
      continue;
    }
    const auto nbrs = g.neighbors(cur);
    cur = nbrs.empty() ? ego : nbrs[rng.uniform_int(nbrs.size())];
    seen.insert(cur);
  }

  RwrResult r;
  r.nodes.assign(seen.begin(), seen.end());
  r.truncated = r.nodes.size() < n_target;
  r.sample.graph = induced_subgraph(g, r.nodes);
  r.sample.ego = static_cast<std::size_t>(std::lower_bound(r.nodes.begin(), r.nodes.end(), ego) - r.nodes.begin());
  r.sample.state.assign(r.nodes.size(), 0);
  return r;
}

}  // namespace auginf::pipeline
