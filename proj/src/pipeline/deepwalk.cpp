#include "auginf/pipeline/deepwalk.hpp"

#include "auginf/error.hpp"

#include <algorithm>
#include <cmath>

namespace auginf::pipeline {

void DeepWalkConfig::validate() const {
  if (dim == 0) throw ConfigError("deepwalk: dimension must be positive");
  if (walk_length == 0) throw ConfigError("deepwalk: walk length must be positive");
  if (window == 0) throw ConfigError("deepwalk: window must be positive");
}

std::vector<std::vector<std::size_t>> random_walks(const graph::UndirectedGraph& g, std::size_t walks_per_node,
                                                   std::size_t walk_length, Rng& rng) {
  std::vector<std::vector<std::size_t>> adj(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) adj[v] = g.neighbors(v);
  std::vector<std::vector<std::size_t>> walks;
  walks.reserve(walks_per_node * g.size());
  for (std::size_t r = 0; r < walks_per_node; ++r) {
    for (std::size_t start = 0; start < g.size(); ++start) {
      std::vector<std::size_t> walk{start};
      while (walk.size() < walk_length && !adj[walk.back()].empty()) {
        const auto& nb = adj[walk.back()];
        walk.push_back(nb[rng.uniform_int(nb.size())]);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

std::vector<std::pair<std::size_t, std::size_t>> skipgram_pairs(const std::vector<std::size_t>& walk,
                                                                std::size_t window) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(walk.size() - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j != i) out.emplace_back(walk[i], walk[j]);
    }
  }
  return out;
}

namespace {

double sigmoid(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

nn::Tensor2 deepwalk_embed(const graph::UndirectedGraph& g, const DeepWalkConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = g.size(), d = cfg.dim;
  nn::Matrix in(n, d), out = nn::Matrix::Zero(n, d);
  for (Eigen::Index i = 0; i < in.size(); ++i) in.data()[i] = (rng.uniform() - 0.5) / static_cast<double>(d);

  const auto walks = random_walks(g, cfg.walks_per_node, cfg.walk_length, rng);
  std::vector<double> cdf(n, 0.0);
  for (const auto& w : walks)
    for (std::size_t v : w) cdf[v] += 1.0;
  double acc = 0;
  for (double& c : cdf) acc = (c = acc + std::pow(c, 0.75));
  for (double& c : cdf) c /= acc;
  auto draw_negative = [&] {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), n - 1);
  };

  std::size_t total = 0;
  for (const auto& w : walks) total += skipgram_pairs(w, cfg.window).size();
  std::size_t done = 0;
  Eigen::RowVectorXd grad_in(d);
  for (const auto& w : walks) {
    for (const auto& [center, context] : skipgram_pairs(w, cfg.window)) {
      const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(done++) / static_cast<double>(total));
      grad_in.setZero();
      for (std::size_t k = 0; k <= cfg.negatives; ++k) {
        const std::size_t target = k == 0 ? context : draw_negative();
        if (k > 0 && target == context) continue;
        const double label = k == 0 ? 1.0 : 0.0;
        const double g_ = lr * (label - sigmoid(in.row(center).dot(out.row(target))));
        grad_in += g_ * out.row(target);
        out.row(target) += g_ * in.row(center);
      }
      in.row(center) += grad_in;
    }
  }
  return nn::Tensor2(std::move(in));
}

}  // namespace auginf::pipeline
