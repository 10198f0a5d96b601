#include "tracenorm/cholesky.hpp"

#include <cholmod.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace tracenorm {

struct SparseCholesky::Impl {
  cholmod_common common{};
  cholmod_factor* factor = nullptr;
  Index n = 0;
  // cholmod_solve uses workspace held in `common`.
  mutable std::mutex mutex;

  Impl() {
    cholmod_start(&common);
    common.print = 0;
    common.error_handler = nullptr;
  }
  ~Impl() {
    if (factor != nullptr) cholmod_free_factor(&factor, &common);
    cholmod_finish(&common);
  }
};

SparseCholesky::SparseCholesky(const CsrMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw DimensionError("SparseCholesky: matrix not square");
  const Index n = a.rows();
  impl_->n = n;
  cholmod_common* c = &impl_->common;

  // A symmetric CSR matrix has the same arrays as its CSC form; stype=1 reads one triangle.
  cholmod_sparse* m = cholmod_allocate_sparse(n, n, a.nnz(), 1, 1, 1, CHOLMOD_REAL, c);
  if (m == nullptr) throw Error("SparseCholesky: allocation failed");
  std::copy(a.row_ptr().begin(), a.row_ptr().end(), static_cast<int*>(m->p));
  std::copy(a.col_idx().begin(), a.col_idx().end(), static_cast<int*>(m->i));
  std::copy(a.values().begin(), a.values().end(), static_cast<double*>(m->x));

  impl_->factor = cholmod_analyze(m, c);
  if (impl_->factor == nullptr) {
    cholmod_free_sparse(&m, c);
    throw Error("SparseCholesky: symbolic analysis failed");
  }
  cholmod_factorize(m, impl_->factor, c);
  cholmod_free_sparse(&m, c);

  cholmod_factor* fac = impl_->factor;
  if (c->status == CHOLMOD_OK && !fac->is_ll && !fac->is_super) {
    const int* p = static_cast<const int*>(fac->p);
    const double* x = static_cast<const double*>(fac->x);
    for (Index j = 0; j < n; ++j)
      if (!(x[p[j]] > 0.0)) {
        fac->minor = static_cast<std::size_t>(j);
        break;
      }
  }
  if (c->status == CHOLMOD_NOT_POSDEF || impl_->factor->minor < static_cast<std::size_t>(n)) {
    const auto minor = impl_->factor->minor;
    std::int64_t pivot = static_cast<std::int64_t>(minor);
    if (impl_->factor->Perm != nullptr && minor < static_cast<std::size_t>(n))
      pivot = static_cast<const int*>(impl_->factor->Perm)[minor];
    throw NotPositiveDefinite("SparseCholesky: matrix is not positive definite", pivot);
  }
  if (c->status < CHOLMOD_OK) throw Error("SparseCholesky: numeric factorization failed");
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

Index SparseCholesky::size() const noexcept { return impl_->n; }

std::size_t SparseCholesky::factor_nnz() const noexcept {
  const cholmod_factor* f = impl_->factor;
  if (f->is_super) return f->xsize;
  return f->nzmax;
}

void SparseCholesky::solve(std::span<const double> b, std::span<double> x) const {
  const Index n = impl_->n;
  if (b.size() != static_cast<std::size_t>(n) || x.size() != static_cast<std::size_t>(n))
    throw DimensionError("SparseCholesky::solve: size mismatch");
  std::lock_guard lock(impl_->mutex);
  cholmod_common* c = &impl_->common;
  cholmod_dense rhs{};
  rhs.nrow = static_cast<std::size_t>(n);
  rhs.ncol = 1;
  rhs.nzmax = rhs.nrow;
  rhs.d = rhs.nrow;
  rhs.x = const_cast<double*>(b.data());
  rhs.xtype = CHOLMOD_REAL;
  rhs.dtype = CHOLMOD_DOUBLE;
  cholmod_dense* sol = cholmod_solve(CHOLMOD_A, impl_->factor, &rhs, c);
  if (sol == nullptr) throw Error("SparseCholesky::solve: CHOLMOD solve failed");
  std::memcpy(x.data(), sol->x, sizeof(double) * static_cast<std::size_t>(n));
  cholmod_free_dense(&sol, c);
}

Vector SparseCholesky::solve(std::span<const double> b) const {
  Vector x(b.size());
  solve(b, x);
  return x;
}

LinearOperator inverse_operator(std::shared_ptr<const SparseCholesky> factor) {
  const Index n = factor->size();
  return {n, [f = std::move(factor)](std::span<const double> x, std::span<double> y) { f->solve(x, y); }};
}

}  // namespace tracenorm
