#pragma once

#include "auginf/numerics/rng.hpp"
#include "auginf/numerics/tape.hpp"

#include <span>

namespace auginf::nn {

// Tape-recorded primitives. All inputs must live on the same tape; shape
// mismatches raise DimensionError naming both shapes.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
Var transpose(Var a);
Var scale(Var a, double s);
Var add_scalar(Var a, double c);

Var sigmoid(Var a);
Var relu(Var a);
Var elu(Var a, double alpha = 1.0);
Var leaky_relu(Var a, double slope = 0.2);
Var exp(Var a);
Var log(Var a);
/// Elementwise clamp; the gradient is zero where the input was clipped.
Var clamp(Var a, double lo, double hi);

/// Softmax over each row restricted to entries where `mask` is nonzero.
/// Masked entries are exactly 0; a fully masked row is all zeros.
Var row_softmax_masked(Var a, const Tensor2& mask);
Var log_softmax_rows(Var a);

Var concat_cols(std::span<const Var> parts);
Var slice(Var a, std::size_t row0, std::size_t nrows, std::size_t col0, std::size_t ncols);

/// 1x1 reductions.
Var sum(Var a);
Var mean(Var a);

/// Inverted dropout: zeroes entries with probability p and rescales the rest
/// by 1/(1-p). Identity on an eval-mode tape or when p == 0. Throws
/// ConfigError unless 0 <= p < 1.
Var dropout(Var a, double p, Rng& rng);

/// Weighted binary cross-entropy evaluated on logits, averaged over the
/// entries where `mask` is nonzero. Entries with target 1 are weighted by
/// `pos_weight`.
Var bce_with_logits(Var logits, const Tensor2& target, const Tensor2& mask, double pos_weight);

/// Same loss evaluated on probabilities, clamped to [1e-15, 1 - 1e-15].
Var bce_probs(Var probs, const Tensor2& target, const Tensor2& mask, double pos_weight);

}  // namespace auginf::nn
