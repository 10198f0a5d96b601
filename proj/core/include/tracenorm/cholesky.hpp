#pragma once

#include <memory>
#include <span>

#include "tracenorm/sparse.hpp"

namespace tracenorm {

/// Sparse LL^T factorization of a symmetric positive definite CSR matrix (CHOLMOD supernodal).
///
/// The factor is read-only after construction; `solve` may be called from several threads.
class SparseCholesky {
 public:
  explicit SparseCholesky(const CsrMatrix& a);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;
  SparseCholesky(const SparseCholesky&) = delete;
  SparseCholesky& operator=(const SparseCholesky&) = delete;

  Index size() const noexcept;
  std::size_t factor_nnz() const noexcept;

  void solve(std::span<const double> b, std::span<double> x) const;
  Vector solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Exact inverse as an operator. The factorization is shared with the returned closure.
LinearOperator inverse_operator(std::shared_ptr<const SparseCholesky> factor);

}  // namespace tracenorm
