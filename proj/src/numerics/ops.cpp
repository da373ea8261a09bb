#include "auginf/numerics/ops.hpp"

#include "auginf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace auginf::nn {
namespace {

Tape& tape_of(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw ContractError("operands recorded on different tapes");
  return a.tape();
}

void same_shape(Var a, Var b, const char* op) { require_same_shape(a.value(), b.value(), op); }

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

template <typename F, typename D>
Var unary(const char* name, Var a, F f, D dfdx_from_xy) {
  const Matrix& x = a.value().mat();
  Matrix y = x.unaryExpr(f);
  Tensor2 out(std::move(y));
  const std::size_t ia = a.id();
  return a.tape().record(name, std::move(out), {a}, [ia, dfdx_from_xy](Tape& t, std::size_t self) {
    const Matrix& xx = t.value(ia).mat();
    const Matrix& yy = t.value(self).mat();
    Matrix d(xx.rows(), xx.cols());
    for (Eigen::Index i = 0; i < xx.size(); ++i) d.data()[i] = dfdx_from_xy(xx.data()[i], yy.data()[i]);
    t.accumulate(ia, t.out_grad(self).cwiseProduct(d));
  });
}

void check_mask_shape(Var a, const Tensor2& mask, const char* op) {
  require_same_shape(a.value(), mask, op);
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = tape_of(a, b);
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: shape " + a.value().shape_str() + " vs " + b.value().shape_str());
  }
  Tensor2 out(Matrix(a.value().mat() * b.value().mat()));
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("matmul", std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.out_grad(self);
    if (tp.requires_grad(ia)) tp.accumulate(ia, g * tp.value(ib).mat().transpose());
    if (tp.requires_grad(ib)) tp.accumulate(ib, tp.value(ia).mat().transpose() * g);
  });
}

Var add(Var a, Var b) {
  Tape& t = tape_of(a, b);
  same_shape(a, b, "add");
  Tensor2 out(Matrix(a.value().mat() + b.value().mat()));
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("add", std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    tp.accumulate(ia, tp.out_grad(self));
    tp.accumulate(ib, tp.out_grad(self));
  });
}

Var sub(Var a, Var b) {
  Tape& t = tape_of(a, b);
  same_shape(a, b, "sub");
  Tensor2 out(Matrix(a.value().mat() - b.value().mat()));
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("sub", std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    tp.accumulate(ia, tp.out_grad(self));
    tp.accumulate(ib, -tp.out_grad(self));
  });
}

Var hadamard(Var a, Var b) {
  Tape& t = tape_of(a, b);
  same_shape(a, b, "hadamard");
  Tensor2 out(Matrix(a.value().mat().cwiseProduct(b.value().mat())));
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("hadamard", std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.out_grad(self);
    if (tp.requires_grad(ia)) tp.accumulate(ia, g.cwiseProduct(tp.value(ib).mat()));
    if (tp.requires_grad(ib)) tp.accumulate(ib, g.cwiseProduct(tp.value(ia).mat()));
  });
}

Var transpose(Var a) {
  Tensor2 out(Matrix(a.value().mat().transpose()));
  const std::size_t ia = a.id();
  return a.tape().record("transpose", std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    tp.accumulate(ia, tp.out_grad(self).transpose());
  });
}

Var scale(Var a, double s) {
  Tensor2 out(Matrix(a.value().mat() * s));
  const std::size_t ia = a.id();
  return a.tape().record("scale", std::move(out), {a}, [ia, s](Tape& tp, std::size_t self) {
    tp.accumulate(ia, tp.out_grad(self) * s);
  });
}

Var add_scalar(Var a, double c) {
  Tensor2 out(Matrix(a.value().mat().array() + c));
  const std::size_t ia = a.id();
  return a.tape().record("add_scalar", std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    tp.accumulate(ia, tp.out_grad(self));
  });
}

Var sigmoid(Var a) {
  return unary("sigmoid", a, [](double x) { return stable_sigmoid(x); },
               [](double, double y) { return y * (1.0 - y); });
}

Var relu(Var a) {
  return unary("relu", a, [](double x) { return x > 0 ? x : 0.0; },
               [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Var elu(Var a, double alpha) {
  return unary("elu", a, [alpha](double x) { return x > 0 ? x : alpha * std::expm1(x); },
               [alpha](double x, double y) { return x > 0 ? 1.0 : y + alpha; });
}

Var leaky_relu(Var a, double slope) {
  return unary("leaky_relu", a, [slope](double x) { return x > 0 ? x : slope * x; },
               [slope](double x, double) { return x > 0 ? 1.0 : slope; });
}

Var exp(Var a) {
  return unary("exp", a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a) {
  return unary("log", a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var clamp(Var a, double lo, double hi) {
  if (!(lo <= hi)) throw ConfigError("clamp: lo > hi");
  return unary("clamp", a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
               [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Var row_softmax_masked(Var a, const Tensor2& mask) {
  check_mask_shape(a, mask, "row_softmax_masked");
  const Matrix& x = a.value().mat();
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (mask(r, c) != 0.0) mx = std::max(mx, x(r, c));
    }
    if (mx == -std::numeric_limits<double>::infinity()) continue;
    double z = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (mask(r, c) != 0.0) {
        y(r, c) = std::exp(x(r, c) - mx);
        z += y(r, c);
      }
    }
    y.row(r) /= z;
  }
  const std::size_t ia = a.id();
  return a.tape().record("row_softmax_masked", Tensor2(std::move(y)), {a}, [ia](Tape& tp, std::size_t self) {
    const Matrix& g = tp.out_grad(self);
    const Matrix& yy = tp.value(self).mat();
    Matrix d = yy.cwiseProduct(g);
    const Eigen::VectorXd dot = d.rowwise().sum();
    d -= yy.cwiseProduct(dot.replicate(1, yy.cols()));
    tp.accumulate(ia, d);
  });
}

Var log_softmax_rows(Var a) {
  const Matrix& x = a.value().mat();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mx = x.row(r).maxCoeff();
    const double lse = mx + std::log((x.row(r).array() - mx).exp().sum());
    y.row(r) = x.row(r).array() - lse;
  }
  const std::size_t ia = a.id();
  return a.tape().record("log_softmax_rows", Tensor2(std::move(y)), {a}, [ia](Tape& tp, std::size_t self) {
    const Matrix& g = tp.out_grad(self);
    const Matrix p = tp.value(self).mat().array().exp().matrix();
    const Eigen::VectorXd gs = g.rowwise().sum();
    tp.accumulate(ia, g - p.cwiseProduct(gs.replicate(1, p.cols())));
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat_cols: no inputs");
  Tape& t = parts.front().tape();
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const Var& p : parts) {
    if (&p.tape() != &t) throw ContractError("concat_cols: operands recorded on different tapes");
    if (p.rows() != rows) {
      throw DimensionError("concat_cols: shape " + parts.front().value().shape_str() + " vs " +
                           p.value().shape_str());
    }
    cols += p.cols();
  }
  Matrix y(rows, cols);
  std::vector<std::size_t> ids, offsets;
  std::size_t off = 0;
  for (const Var& p : parts) {
    y.middleCols(off, p.cols()) = p.value().mat();
    ids.push_back(p.id());
    offsets.push_back(off);
    off += p.cols();
  }
  return t.record("concat_cols", Tensor2(std::move(y)), parts,
                  [ids = std::move(ids), offsets = std::move(offsets)](Tape& tp, std::size_t self) {
                    const Matrix& g = tp.out_grad(self);
                    for (std::size_t k = 0; k < ids.size(); ++k) {
                      if (!tp.requires_grad(ids[k])) continue;
                      tp.accumulate(ids[k], g.middleCols(offsets[k], tp.value(ids[k]).cols()));
                    }
                  });
}

Var slice(Var a, std::size_t row0, std::size_t nrows, std::size_t col0, std::size_t ncols) {
  if (row0 + nrows > a.rows() || col0 + ncols > a.cols()) {
    throw DimensionError("slice: block " + shape_str(nrows, ncols) + " at (" + std::to_string(row0) + "," +
                         std::to_string(col0) + ") exceeds " + a.value().shape_str());
  }
  Matrix y = a.value().mat().block(row0, col0, nrows, ncols);
  const std::size_t ia = a.id();
  return a.tape().record("slice", Tensor2(std::move(y)), {a}, [ia, row0, nrows, col0, ncols](Tape& tp, std::size_t self) {
    const Tensor2& x = tp.value(ia);
    Matrix g = Matrix::Zero(x.rows(), x.cols());
    g.block(row0, col0, nrows, ncols) = tp.out_grad(self);
    tp.accumulate(ia, g);
  });
}

Var sum(Var a) {
  Tensor2 out(1, 1, a.value().mat().sum());
  const std::size_t ia = a.id();
  return a.tape().record("sum", std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    const Tensor2& x = tp.value(ia);
    tp.accumulate(ia, Matrix::Constant(x.rows(), x.cols(), tp.out_grad(self)(0, 0)));
  });
}

Var mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0) throw DimensionError("mean: empty tensor");
  Tensor2 out(1, 1, a.value().mat().sum() / n);
  const std::size_t ia = a.id();
  return a.tape().record("mean", std::move(out), {a}, [ia, n](Tape& tp, std::size_t self) {
    const Tensor2& x = tp.value(ia);
    tp.accumulate(ia, Matrix::Constant(x.rows(), x.cols(), tp.out_grad(self)(0, 0) / n));
  });
}

Var dropout(Var a, double p, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("dropout: p must be in [0,1), got " + std::to_string(p));
  if (!a.tape().training() || p == 0.0) return a;
  const double keep_scale = 1.0 / (1.0 - p);
  Matrix mask(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.uniform() < p ? 0.0 : keep_scale;
  Tensor2 out(Matrix(a.value().mat().cwiseProduct(mask)));
  const std::size_t ia = a.id();
  return a.tape().record("dropout", std::move(out), {a}, [ia, mask = std::move(mask)](Tape& tp, std::size_t self) {
    tp.accumulate(ia, tp.out_grad(self).cwiseProduct(mask));
  });
}

namespace {

double mask_count(const Tensor2& mask) {
  double c = 0;
  for (double m : mask.data()) c += (m != 0.0);
  return c;
}

}  // namespace

Var bce_with_logits(Var logits, const Tensor2& target, const Tensor2& mask, double pos_weight) {
  check_mask_shape(logits, target, "bce_with_logits");
  check_mask_shape(logits, mask, "bce_with_logits");
  const double count = mask_count(mask);
  if (count == 0) throw ContractError("bce_with_logits: empty mask");
  const Matrix& x = logits.value().mat();
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (mask.data()[i] == 0.0) continue;
    const double y = target.data()[i], v = x.data()[i];
    total += pos_weight * y * softplus(-v) + (1.0 - y) * softplus(v);
  }
  const std::size_t ia = logits.id();
  return logits.tape().record(
      "bce_with_logits", Tensor2(1, 1, total / count), {logits},
      [ia, target, mask, pos_weight, count](Tape& tp, std::size_t self) {
        const Matrix& xx = tp.value(ia).mat();
        const double g = tp.out_grad(self)(0, 0) / count;
        Matrix d = Matrix::Zero(xx.rows(), xx.cols());
        for (Eigen::Index i = 0; i < xx.size(); ++i) {
          if (mask.data()[i] == 0.0) continue;
          const double y = target.data()[i], s = stable_sigmoid(xx.data()[i]);
          d.data()[i] = g * (pos_weight * y * (s - 1.0) + (1.0 - y) * s);
        }
        tp.accumulate(ia, d);
      });
}

Var bce_probs(Var probs, const Tensor2& target, const Tensor2& mask, double pos_weight) {
  static constexpr double kEps = 1e-15;
  check_mask_shape(probs, target, "bce_probs");
  check_mask_shape(probs, mask, "bce_probs");
  const double count = mask_count(mask);
  if (count == 0) throw ContractError("bce_probs: empty mask");
  const Matrix& m = probs.value().mat();
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (mask.data()[i] == 0.0) continue;
    const double y = target.data()[i], v = std::clamp(m.data()[i], kEps, 1.0 - kEps);
    total -= pos_weight * y * std::log(v) + (1.0 - y) * std::log(1.0 - v);
  }
  const std::size_t ia = probs.id();
  return probs.tape().record(
      "bce_probs", Tensor2(1, 1, total / count), {probs},
      [ia, target, mask, pos_weight, count](Tape& tp, std::size_t self) {
        const Matrix& mm = tp.value(ia).mat();
        const double g = tp.out_grad(self)(0, 0) / count;
        Matrix d = Matrix::Zero(mm.rows(), mm.cols());
        for (Eigen::Index i = 0; i < mm.size(); ++i) {
          if (mask.data()[i] == 0.0) continue;
          const double y = target.data()[i], v = std::clamp(mm.data()[i], kEps, 1.0 - kEps);
          d.data()[i] = g * (-pos_weight * y / v + (1.0 - y) / (1.0 - v));
        }
        tp.accumulate(ia, d);
      });
}

}  // namespace auginf::nn
