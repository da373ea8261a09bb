#pragma once

// Independent reference implementations used only by tests. They use plain
// loops over std::vector so they share no code path with the library.

#include "auginf/numerics/rng.hpp"
#include "auginf/numerics/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const auginf::nn::Tensor2& t) {
  Dense d(t.rows(), std::vector<double>(t.cols()));
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) d[i][j] = t(i, j);
  return d;
}

inline Dense matmul(const Dense& a, const Dense& b) {
  Dense c(a.size(), std::vector<double>(b.empty() ? 0 : b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Dense transpose(const Dense& a) {
  Dense t(a.empty() ? 0 : a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline double max_diff(const Dense& a, const auginf::nn::Tensor2& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b(i, j)));
  return m;
}

/// Diag(d)^{-1/2} (A + I) Diag(d)^{-1/2} as two explicit matrix products.
inline Dense normalized_adjacency(const Dense& a) {
  const std::size_t n = a.size();
  Dense at = a, dinv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) at[i][i] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0;
    for (double v : at[i]) deg += v;
    dinv[i][i] = 1.0 / std::sqrt(deg);
  }
  return matmul(matmul(dinv, at), dinv);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double elu(double x) { return x > 0 ? x : std::exp(x) - 1.0; }
inline double leaky(double x, double s) { return x > 0 ? x : s * x; }

/// alpha_ij over j in N(i) + {i}, computed one row at a time.
inline Dense gat_attention(const Dense& wh, const std::vector<double>& a_src, const std::vector<double>& a_dst,
                           const Dense& adj, double slope) {
  const std::size_t n = wh.size();
  Dense alpha(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    std::vector<bool> attend(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      attend[j] = i == j || adj[i][j] != 0.0;
      if (!attend[j]) continue;
      double v = 0;
      for (std::size_t f = 0; f < wh[i].size(); ++f) v += a_src[f] * wh[i][f] + a_dst[f] * wh[j][f];
      e[j] = leaky(v, slope);
    }
    double z = 0;
    for (std::size_t j = 0; j < n; ++j) if (attend[j]) z += std::exp(e[j]);
    for (std::size_t j = 0; j < n; ++j) if (attend[j]) alpha[i][j] = std::exp(e[j]) / z;
  }
  return alpha;
}

inline Dense random_dense(auginf::Rng& rng, std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
  Dense d(r, std::vector<double>(c));
  for (auto& row : d) for (double& v : row) v = rng.uniform(lo, hi);
  return d;
}

inline Dense random_adjacency(auginf::Rng& rng, std::size_t n, double p) {
  Dense a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) a[i][j] = a[j][i] = 1.0;
  return a;
}

inline auginf::nn::Tensor2 to_tensor(const Dense& d) {
  auginf::nn::Tensor2 t(d.size(), d.empty() ? 0 : d[0].size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j) t(i, j) = d[i][j];
  return t;
}

/// Pairwise concordance: P(pos > neg) + 0.5 P(tie).
inline double auc_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      den += 1;
      if (scores[i] > scores[j]) num += 1;
      else if (scores[i] == scores[j]) num += 0.5;
    }
  }
  return num / den;
}

}  // namespace oracle
