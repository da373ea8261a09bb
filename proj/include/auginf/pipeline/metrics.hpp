#pragma once

#include <cstdint>
#include <span>

namespace auginf::pipeline {

/// P(score_pos > score_neg) + 0.5 P(tie), via tie-averaged ranks. Throws
/// DataError unless both classes are present.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// F1 of the positive class with prediction = score >= cut. Defined as 0
/// (with a logged warning) when there are neither predicted nor actual
/// positives.
double f1(std::span<const double> scores, std::span<const std::uint8_t> labels, double cut = 0.5);

}  // namespace auginf::pipeline
