#include "auginf/numerics/tape.hpp"

#include "auginf/error.hpp"

namespace auginf::nn {

Parameter::Parameter(std::string name_, Tensor2 value_)
    : name(std::move(name_)), value(std::move(value_)), grad(value.rows(), value.cols()) {}

void Parameter::zero_grad() {
  if (grad.rows() != value.rows() || grad.cols() != value.cols()) {
    grad = Tensor2(value.rows(), value.cols());
  } else {
    grad.mat().setZero();
  }
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::check_same_tape(Var v) const {
  if (!v.valid() || &v.tape() != this || v.id() >= nodes_.size()) {
    throw ContractError("variable does not belong to this tape");
  }
}

Var Tape::constant(Tensor2 value) {
  if (!value.all_finite()) throw NumericalError("constant: non-finite value " + value.shape_str());
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::param(Parameter& p) {
  if (!p.value.all_finite()) throw NumericalError("parameter '" + p.name + "' is non-finite");
  if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) p.zero_grad();
  Node n;
  n.value = p.value;
  n.param = &p;
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::record(const char* name, Tensor2 value, std::initializer_list<Var> inputs, BackwardFn backward) {
  return record(name, std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(backward));
}

Var Tape::record(const char* name, Tensor2 value, std::span<const Var> inputs, BackwardFn backward) {
  if (!value.all_finite()) {
    throw NumericalError(std::string(name) + ": non-finite output " + value.shape_str());
  }
  Node n;
  n.value = std::move(value);
  for (const Var& v : inputs) {
    check_same_tape(v);
    n.requires_grad = n.requires_grad || nodes_[v.id()].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

void Tape::accumulate(std::size_t id, const Matrix& g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

void Tape::backward(Var loss) {
  check_same_tape(loss);
  const Tensor2& lv = nodes_[loss.id()].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ContractError("backward: loss must be 1x1, got " + lv.shape_str());
  }
  if (backward_done_) throw ContractError("backward: tape already consumed");
  backward_done_ = true;
  if (!nodes_[loss.id()].requires_grad) return;

  nodes_[loss.id()].grad = Matrix::Ones(1, 1);
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.param != nullptr) {
      n.param->grad.mat() += n.grad;
    } else if (n.backward) {
      n.backward(*this, i);
    }
  }
}

Tensor2 Tape::grad(Var v) const {
  check_same_tape(v);
  const Node& n = nodes_[v.id()];
  if (n.grad.size() == 0) return Tensor2(n.value.rows(), n.value.cols());
  return Tensor2(n.grad);
}

}  // namespace auginf::nn
