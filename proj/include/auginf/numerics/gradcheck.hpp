#pragma once

#include "auginf/numerics/tape.hpp"

#include <functional>
#include <span>
#include <string>

namespace auginf::nn {

struct GradCheckReport {
  bool passed = true;
  double max_rel_error = 0.0;
  std::string worst;  // "<param>[r,c]" of the worst coordinate
  std::size_t coordinates = 0;
};

/// Builds a scalar loss on a fresh tape, reading parameters via `tape.param`.
using LossBuilder = std::function<Var(Tape&)>;

/// Compares backprop gradients of `f` against central differences for every
/// coordinate of every parameter. Relative error per coordinate is
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-3).
GradCheckReport grad_check(const LossBuilder& f, std::span<Parameter* const> params, double step = 1e-5,
                           double tol = 1e-4, Mode mode = Mode::kTrain);

/// Single-input form: f(tape, x) at x = point.
GradCheckReport grad_check(const std::function<Var(Tape&, Var)>& f, const Tensor2& point, double step = 1e-5,
                           double tol = 1e-4, Mode mode = Mode::kTrain);

}  // namespace auginf::nn
