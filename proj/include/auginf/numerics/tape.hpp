#pragma once

#include "auginf/numerics/tensor.hpp"

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace auginf::nn {

/// A named trainable matrix together with its accumulated gradient.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor2 value);

  void zero_grad();

  std::string name;
  Tensor2 value;
  Tensor2 grad;
};

enum class Mode { kTrain, kEval };

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; only valid while the
/// tape that produced it is alive.
class Var {
 public:
  Var() = default;

  const Tensor2& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode record of primitive ops.
///
/// Nodes are appended in evaluation order, so inputs always precede their
/// consumers and a single reverse sweep visits every node once. Parameter
/// leaves add their gradient into `Parameter::grad`, so several tapes may feed
/// the same parameters before an optimizer step.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  explicit Tape(Mode mode = Mode::kTrain) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Mode mode() const { return mode_; }
  bool training() const { return mode_ == Mode::kTrain; }

  Var constant(Tensor2 value);
  Var param(Parameter& p);

  /// Append an op result. `name` is reported when the value is non-finite.
  Var record(const char* name, Tensor2 value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var record(const char* name, Tensor2 value, std::span<const Var> inputs, BackwardFn backward);

  /// Backpropagate from a 1x1 loss node. May be called once per tape.
  void backward(Var loss);

  const Tensor2& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  /// Gradient of the loss w.r.t. node `id`; zeros if nothing reached it.
  Tensor2 grad(Var v) const;

  // Used inside backward rules.
  const Matrix& out_grad(std::size_t id) const { return nodes_[id].grad; }
  void accumulate(std::size_t id, const Matrix& g);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor2 value;
    Matrix grad;  // empty until reached by the backward sweep
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  Var push(Node node);
  void check_same_tape(Var v) const;

  Mode mode_;
  std::deque<Node> nodes_;  // deque keeps value() references stable while recording
  bool backward_done_ = false;
};

inline const Tensor2& Var::value() const { return tape_->value(id_); }

}  // namespace auginf::nn
