#include "tracenorm/dense.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace tracenorm {

DenseMatrix::DenseMatrix(Index rows, Index cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw DimensionError("DenseMatrix: negative dimension");
}

DenseMatrix DenseMatrix::identity(Index n) {
  DenseMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols_) || y.size() != static_cast<std::size_t>(rows_))
    throw DimensionError("DenseMatrix::multiply: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (Index j = 0; j < cols_; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const auto col = column(j);
    for (Index i = 0; i < rows_; ++i) y[i] += col[i] * xj;
  }
}

void DenseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(rows_) || y.size() != static_cast<std::size_t>(cols_))
    throw DimensionError("DenseMatrix::multiply_transpose: dimension mismatch");
  for (Index j = 0; j < cols_; ++j) {
    const auto col = column(j);
    double s = 0.0;
    for (Index i = 0; i < rows_; ++i) s += col[i] * x[i];
    y[j] = s;
  }
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (Index j = 0; j < cols_; ++j)
    for (Index i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("DenseMatrix product: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    auto cj = c.column(j);
    for (Index k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const auto ak = a.column(k);
      for (Index i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

DenseSymMatrix::DenseSymMatrix(Index n, double fill)
    : n_(n), data_(static_cast<std::size_t>(n) * (n + 1) / 2, fill) {
  if (n < 0) throw DimensionError("DenseSymMatrix: negative order");
}

DenseSymMatrix DenseSymMatrix::identity(Index n) {
  DenseSymMatrix m(n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseSymMatrix DenseSymMatrix::diagonal(std::span<const double> d) {
  DenseSymMatrix m(static_cast<Index>(d.size()));
  for (Index i = 0; i < m.order(); ++i) m(i, i) = d[i];
  return m;
}

DenseSymMatrix DenseSymMatrix::from_dense(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("DenseSymMatrix::from_dense: matrix not square");
  DenseSymMatrix m(a.rows());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = j; i < a.rows(); ++i) m(i, j) = 0.5 * (a(i, j) + a(j, i));
  return m;
}

void DenseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_))
    throw DimensionError("DenseSymMatrix::multiply: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  const double* row = data_.data();
  for (Index i = 0; i < n_; ++i) {
    double s = 0.0;
    const double xi = x[i];
    for (Index j = 0; j < i; ++j) {
      s += row[j] * x[j];
      y[j] += row[j] * xi;
    }
    y[i] += s + row[i] * xi;
    row += i + 1;
  }
}

Vector DenseSymMatrix::multiply(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(n_));
  multiply(x, y);
  return y;
}

double DenseSymMatrix::quadratic_form(std::span<const double> x) const {
  return dot(x, multiply(x));
}

DenseMatrix DenseSymMatrix::to_dense() const {
  DenseMatrix a(n_, n_);
  for (Index j = 0; j < n_; ++j)
    for (Index i = 0; i < n_; ++i) a(i, j) = (*this)(i, j);
  return a;
}

double DenseSymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

DenseSymMatrix& DenseSymMatrix::operator+=(const DenseSymMatrix& other) {
  if (other.n_ != n_) throw DimensionError("DenseSymMatrix +=: order mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseSymMatrix& DenseSymMatrix::operator*=(double alpha) {
  for (double& v : data_) v *= alpha;
  return *this;
}

DenseSymMatrix operator+(DenseSymMatrix a, const DenseSymMatrix& b) {
  a += b;
  return a;
}

DenseCholesky::DenseCholesky(const DenseSymMatrix& a) : lower_(a.order(), a.order()) {
  const Index n = a.order();
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) lower_(i, j) = a(i, j);
  factor();
}

DenseCholesky::DenseCholesky(const DenseMatrix& a) : lower_(a.rows(), a.cols()) {
  if (a.rows() != a.cols()) throw DimensionError("DenseCholesky: matrix not square");
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) lower_(i, j) = a(i, j);
  factor();
}

// Left-looking column Cholesky on the lower triangle.
void DenseCholesky::factor() {
  const Index n = lower_.rows();
  for (Index j = 0; j < n; ++j) {
    auto cj = lower_.column(j);
    for (Index k = 0; k < j; ++k) {
      const auto ck = lower_.column(k);
      const double ljk = ck[j];
      if (ljk == 0.0) continue;
      for (Index i = j; i < n; ++i) cj[i] -= ck[i] * ljk;
    }
    const double d = cj[j];
    if (!(d > 0.0) || !std::isfinite(d))
      throw NotPositiveDefinite("DenseCholesky: matrix is not positive definite", j);
    const double r = std::sqrt(d);
    cj[j] = r;
    for (Index i = j + 1; i < n; ++i) cj[i] /= r;
    for (Index i = 0; i < j; ++i) cj[i] = 0.0;
  }
}

void DenseCholesky::forward_in_place(std::span<double> b) const {
  const Index n = order();
  if (b.size() != static_cast<std::size_t>(n)) throw DimensionError("DenseCholesky: rhs size mismatch");
  for (Index j = 0; j < n; ++j) {
    const auto cj = lower_.column(j);
    b[j] /= cj[j];
    const double bj = b[j];
    for (Index i = j + 1; i < n; ++i) b[i] -= cj[i] * bj;
  }
}

void DenseCholesky::backward_in_place(std::span<double> b) const {
  const Index n = order();
  if (b.size() != static_cast<std::size_t>(n)) throw DimensionError("DenseCholesky: rhs size mismatch");
  for (Index j = n - 1; j >= 0; --j) {
    const auto cj = lower_.column(j);
    double s = b[j];
    for (Index i = j + 1; i < n; ++i) s -= cj[i] * b[i];
    b[j] = s / cj[j];
  }
}

void DenseCholesky::solve_in_place(std::span<double> b) const {
  forward_in_place(b);
  backward_in_place(b);
}

Vector DenseCholesky::solve(std::span<const double> b) const {
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

LinearOperator DenseCholesky::inverse_operator() const {
  auto self = std::make_shared<const DenseCholesky>(*this);
  return {order(), [self](std::span<const double> x, std::span<double> y) {
            std::copy(x.begin(), x.end(), y.begin());
            self->solve_in_place(y);
          }};
}

}  // namespace tracenorm
