#include "auginf/numerics/tensor.hpp"

#include "auginf/error.hpp"

namespace auginf::nn {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : m_(Matrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), fill)) {}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Tensor2 t(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("from_rows: ragged row " + std::to_string(i));
    std::size_t j = 0;
    for (double v : row) t(i, j++) = v;
    ++i;
  }
  return t;
}

Tensor2 Tensor2::identity(std::size_t n) {
  return Tensor2(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

double Tensor2::item() const {
  if (rows() != 1 || cols() != 1) throw ContractError("item() on non-scalar " + shape_str());
  return m_(0, 0);
}

std::string Tensor2::shape_str() const { return nn::shape_str(rows(), cols()); }

std::string shape_str(std::size_t rows, std::size_t cols) {
  return "(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
}

void require_same_shape(const Tensor2& a, const Tensor2& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape " + a.shape_str() + " vs " + b.shape_str());
  }
}

double max_abs_diff(const Tensor2& a, const Tensor2& b) {
  require_same_shape(a, b, "max_abs_diff");
  if (a.size() == 0) return 0.0;
  return (a.mat() - b.mat()).cwiseAbs().maxCoeff();
}

}  // namespace auginf::nn
