#include "auginf/pipeline/metrics.hpp"

#include "auginf/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <numeric>
#include <vector>

namespace auginf::pipeline {

namespace {

void check_lengths(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw DimensionError("metric: " + std::to_string(scores.size()) + " scores vs " + std::to_string(labels.size()) +
                         " labels");
  }
}

}  // namespace

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_lengths(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos = 0, rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1 .. j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[idx[k]]) {
        pos += 1;
        rank_sum += avg_rank;
      }
    }
    i = j;
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0 || neg == 0) throw DataError("AUC is undefined when only one class is present");
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

double f1(std::span<const double> scores, std::span<const std::uint8_t> labels, double cut) {
  check_lengths(scores, labels);
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= cut;
    if (pred && labels[i]) tp += 1;
    if (pred && !labels[i]) fp += 1;
    if (!pred && labels[i]) fn += 1;
  }
  if (tp + fp == 0 && tp + fn == 0) {
    spdlog::warn("F1 with no predicted and no actual positives; reporting 0");
    return 0.0;
  }
  return 2 * tp / (2 * tp + fp + fn);
}

}  // namespace auginf::pipeline
