#pragma once

#include <span>
#include <vector>

#include "tracenorm/vector.hpp"

namespace tracenorm {

/// General dense matrix, column-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, double fill = 0.0);

  static DenseMatrix identity(Index n);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  double& operator()(Index i, Index j) { return data_[static_cast<std::size_t>(j) * rows_ + i]; }
  double operator()(Index i, Index j) const { return data_[static_cast<std::size_t>(j) * rows_ + i]; }

  std::span<double> column(Index j) { return {data_.data() + static_cast<std::size_t>(j) * rows_, static_cast<std::size_t>(rows_)}; }
  std::span<const double> column(Index j) const {
    return {data_.data() + static_cast<std::size_t>(j) * rows_, static_cast<std::size_t>(rows_)};
  }
  std::span<const double> data() const noexcept { return data_; }

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  DenseMatrix transpose() const;
  double max_abs() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

/// Symmetric matrix in packed lower-triangular storage; symmetry holds by construction.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(Index n, double fill = 0.0);

  static DenseSymMatrix identity(Index n);
  static DenseSymMatrix diagonal(std::span<const double> d);
  /// Takes the lower triangle of `a` after averaging with its transpose.
  static DenseSymMatrix from_dense(const DenseMatrix& a);

  Index order() const noexcept { return n_; }

  double operator()(Index i, Index j) const { return data_[offset(i, j)]; }
  double& operator()(Index i, Index j) { return data_[offset(i, j)]; }

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;

  DenseMatrix to_dense() const;
  double max_abs() const;

  DenseSymMatrix& operator+=(const DenseSymMatrix& other);
  DenseSymMatrix& operator*=(double alpha);

 private:
  static std::size_t offset(Index i, Index j) {
    if (i < j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  Index n_ = 0;
  std::vector<double> data_;
};

DenseSymMatrix operator+(DenseSymMatrix a, const DenseSymMatrix& b);

/// Dense LL^T factorization of an SPD matrix.
class DenseCholesky {
 public:
  explicit DenseCholesky(const DenseSymMatrix& a);
  explicit DenseCholesky(const DenseMatrix& a);

  Index order() const noexcept { return lower_.rows(); }
  const DenseMatrix& lower() const noexcept { return lower_; }

  void solve_in_place(std::span<double> b) const;
  Vector solve(std::span<const double> b) const;
  /// b <- L^{-1} b
  void forward_in_place(std::span<double> b) const;
  /// b <- L^{-T} b
  void backward_in_place(std::span<double> b) const;

  LinearOperator inverse_operator() const;

 private:
  void factor();
  DenseMatrix lower_;
};

}  // namespace tracenorm
