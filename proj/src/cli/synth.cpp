#include "auginf/cli/synth.hpp"

#include "auginf/error.hpp"
#include "auginf/pipeline/sampling.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace auginf::cli {

std::vector<int> timed_cascade(const graph::UndirectedGraph& g, const std::vector<std::size_t>& seeds, double p,
                               Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("cascade probability must be in [0, 1]");
  std::vector<int> t(g.size(), -1);
  std::vector<std::size_t> frontier;
  for (std::size_t s : seeds) {
    if (s >= g.size()) throw ContractError("cascade seed " + std::to_string(s) + " not in graph");
    if (t[s] < 0) frontier.push_back(s);
    t[s] = 0;
  }
  for (int step = 1; !frontier.empty(); ++step) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (std::size_t v : g.neighbors(u)) {
        if (t[v] < 0 && rng.uniform() < p) {
          t[v] = step;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return t;
}

std::vector<std::size_t> independent_cascade(const graph::UndirectedGraph& g, const std::vector<std::size_t>& seeds,
                                             double p, Rng& rng) {
  const auto t = timed_cascade(g, seeds, p, rng);
  std::vector<std::size_t> active;
  for (std::size_t v = 0; v < t.size(); ++v)
    if (t[v] >= 0) active.push_back(v);
  return active;
}

graph::UndirectedGraph watts_strogatz(std::size_t n, std::size_t k, double beta, Rng& rng) {
  if (k % 2 != 0 || k >= n) throw ConfigError("watts_strogatz: k must be even and below n");
  graph::UndirectedGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= k / 2; ++j) g.add_edge(i, (i + j) % n);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v = (i + j) % n;
      if (!g.has_edge(i, v) || rng.uniform() >= beta) continue;
      if (g.neighbors(i).size() >= n - 1) continue;
      std::size_t w;
      do {
        w = rng.uniform_int(n);
      } while (w == i || g.has_edge(i, w));
      g.set(i, v, 0);
      g.set(v, i, 0);
      g.add_edge(i, w);
    }
  }
  return g;
}

graph::UndirectedGraph barabasi_albert(std::size_t n, std::size_t m, Rng& rng) {
  if (m == 0 || m >= n) throw ConfigError("barabasi_albert: m must be in [1, n)");
  graph::UndirectedGraph g(n);
  std::vector<std::size_t> targets(m), repeated;
  for (std::size_t i = 0; i < m; ++i) targets[i] = i;
  for (std::size_t v = m; v < n; ++v) {
    for (std::size_t u : targets) {
      g.add_edge(v, u);
      repeated.push_back(u);
      repeated.push_back(v);
    }
    std::set<std::size_t> chosen;
    while (chosen.size() < m) chosen.insert(repeated[rng.uniform_int(repeated.size())]);
    targets.assign(chosen.begin(), chosen.end());
  }
  return g;
}

void CascadeConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("activation probability must be in [0, 1]");
  if (seed_set == 0) throw ConfigError("seed set must be non-empty");
  if (seed_set >= nodes) throw ConfigError("seed set must be smaller than the graph");
  if (n_target == 0 || n_target > nodes) throw ConfigError("subgraph size must be in [1, nodes]");
  if (samples == 0) throw ConfigError("sample count must be positive");
  if (!(frontier_share >= 0.0 && frontier_share <= 1.0)) throw ConfigError("frontier share must be in [0, 1]");
  if (!(rwr_restart >= 0.0 && rwr_restart < 1.0)) throw ConfigError("restart probability must be in [0, 1)");
}

nlohmann::json CascadeConfig::to_json() const {
  return {{"graph", graph == BaseGraph::kSmallWorld ? "ws" : "ba"},
          {"nodes", nodes},
          {"ws_k", ws_k},
          {"ws_beta", ws_beta},
          {"ba_m", ba_m},
          {"seed_set", seed_set},
          {"p", p},
          {"samples", samples},
          {"n_target", n_target},
          {"rwr_restart", rwr_restart},
          {"frontier_share", frontier_share},
          {"seed", seed}};
}

CascadeConfig CascadeConfig::from_json(const nlohmann::json& j) {
  CascadeConfig c;
  const auto g = j.at("graph").get<std::string>();
  if (g != "ws" && g != "ba") throw ConfigError("unknown base graph '" + g + "'");
  c.graph = g == "ws" ? BaseGraph::kSmallWorld : BaseGraph::kPreferential;
  c.nodes = j.at("nodes").get<std::size_t>();
  c.ws_k = j.at("ws_k").get<std::size_t>();
  c.ws_beta = j.at("ws_beta").get<double>();
  c.ba_m = j.at("ba_m").get<std::size_t>();
  c.seed_set = j.at("seed_set").get<std::size_t>();
  c.p = j.at("p").get<double>();
  c.samples = j.at("samples").get<std::size_t>();
  c.n_target = j.at("n_target").get<std::size_t>();
  c.rwr_restart = j.at("rwr_restart").get<double>();
  c.frontier_share = j.at("frontier_share").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

graph::Splits stratified_split(const std::vector<graph::EgoSample>& samples, Rng& rng) {
  graph::Splits s;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (samples[i].label == cls) idx.push_back(i);
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.uniform_int(i)]);
    const auto c = static_cast<double>(idx.size());
    const auto n_train = static_cast<std::size_t>(std::lround(0.75 * c));
    const auto n_valid = std::min(idx.size() - n_train, static_cast<std::size_t>(std::lround(0.125 * c)));
    s.train.insert(s.train.end(), idx.begin(), idx.begin() + n_train);
    s.valid.insert(s.valid.end(), idx.begin() + n_train, idx.begin() + n_train + n_valid);
    s.test.insert(s.test.end(), idx.begin() + n_train + n_valid, idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.valid.begin(), s.valid.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

namespace {

std::vector<std::size_t> clustered_seeds(const graph::UndirectedGraph& g, std::size_t count, Rng& rng) {
  const std::size_t origin = rng.uniform_int(g.size());
  std::set<std::size_t> seeds{origin};
  std::size_t cur = origin;
  for (std::size_t step = 0; step < 100 * count && seeds.size() < count; ++step) {
    const auto nb = g.neighbors(cur);
    cur = (nb.empty() || rng.uniform() < 0.3) ? origin : nb[rng.uniform_int(nb.size())];
    seeds.insert(cur);
  }
  return {seeds.begin(), seeds.end()};
}

}  // namespace

graph::Dataset synthesize(const CascadeConfig& cfg) {
  cfg.validate();
  const Rng root(cfg.seed);
  Rng grng = root.split(0x67726170u);
  const graph::UndirectedGraph base = cfg.graph == BaseGraph::kSmallWorld
                                          ? watts_strogatz(cfg.nodes, cfg.ws_k, cfg.ws_beta, grng)
                                          : barabasi_albert(cfg.nodes, cfg.ba_m, grng);
  Rng rng = root.split(0x73616d70u);
  graph::Dataset d;
  d.meta = {"synthetic-cascade", cfg.seed};
  std::size_t attempts = 0;
  const std::size_t max_attempts = 50 * cfg.samples + 1000;
  while (d.samples.size() < cfg.samples) {
    if (++attempts > max_attempts) {
      throw ConfigError("synth: could not draw " + std::to_string(cfg.samples) + " full-size samples after " +
                        std::to_string(max_attempts) + " attempts");
    }
    const auto seeds = clustered_seeds(base, cfg.seed_set, rng);
    const auto t = timed_cascade(base, seeds, cfg.p, rng);
    std::vector<std::size_t> frontier, two_hop;
    std::vector<std::uint8_t> near(base.size(), 0);
    for (std::size_t v = 0; v < base.size(); ++v) {
      if (t[v] == 0) continue;
      for (std::size_t u : base.neighbors(v)) {
        if (t[u] == 0) near[v] = 1;
      }
      if (near[v]) frontier.push_back(v);
    }
    for (std::size_t v = 0; v < base.size(); ++v) {
      if (t[v] == 0 || near[v]) continue;
      for (std::size_t u : base.neighbors(v)) {
        if (near[u]) {
          two_hop.push_back(v);
          break;
        }
      }
    }
    const bool use_frontier = rng.uniform() < cfg.frontier_share || two_hop.empty();
    const auto& pool = use_frontier ? frontier : two_hop;
    if (pool.empty()) continue;
    const std::size_t ego = pool[rng.uniform_int(pool.size())];

    auto r = pipeline::rwr_sample(base, ego, cfg.n_target, cfg.rwr_restart, rng);
    if (r.truncated) continue;
    graph::EgoSample s = std::move(r.sample);
    for (std::size_t k = 0; k < r.nodes.size(); ++k) s.state[k] = t[r.nodes[k]] == 0 ? 1 : 0;
    s.label = t[ego] == 1 ? 1 : 0;
    char id[32];
    std::snprintf(id, sizeof id, "s%05zu", d.samples.size());
    s.id = id;
    d.samples.push_back(std::move(s));
  }

  std::size_t positives = 0;
  for (const auto& s : d.samples) positives += s.label;
  const double rate = static_cast<double>(positives) / static_cast<double>(d.samples.size());
  spdlog::info("synth: {} samples, {} positive ({:.1f}%)", d.samples.size(), positives, 100.0 * rate);
  if (positives == 0 || positives == d.samples.size()) {
    throw ConfigError("synth: every sample has label " + std::to_string(positives == 0 ? 0 : 1) +
                      "; raise or lower the activation probability");
  }
  Rng srng = root.split(0x73706c74u);
  d.splits = stratified_split(d.samples, srng);
  d.base = base;
  return d;
}

}  // namespace auginf::cli
