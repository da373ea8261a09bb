#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace auginf::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense row-major fp64 matrix. Every model quantity (features, weights,
/// adjacency, embeddings, edge probabilities) is one of these.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  explicit Tensor2(Matrix m) : m_(std::move(m)) {}

  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor2 identity(std::size_t n);

  std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(m_.size()); }

  double& operator()(std::size_t r, std::size_t c) { return m_(r, c); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  std::span<double> data() { return {m_.data(), size()}; }
  std::span<const double> data() const { return {m_.data(), size()}; }

  Matrix& mat() { return m_; }
  const Matrix& mat() const { return m_; }

  /// Scalar value of a 1x1 tensor.
  double item() const;
  bool all_finite() const { return m_.allFinite(); }
  std::string shape_str() const;

  friend bool operator==(const Tensor2& a, const Tensor2& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

std::string shape_str(std::size_t rows, std::size_t cols);

/// Throws DimensionError naming both shapes when a and b differ.
void require_same_shape(const Tensor2& a, const Tensor2& b, const char* op);

/// Max absolute elementwise difference; shapes must match.
double max_abs_diff(const Tensor2& a, const Tensor2& b);

}  // namespace auginf::nn
