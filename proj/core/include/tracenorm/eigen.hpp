#pragma once

#include <cstdint>

#include "tracenorm/dense.hpp"

namespace tracenorm {

struct EigenDecomposition {
  /// Ascending.
  Vector values;
  /// Column k pairs with values[k]; M-orthonormal for generalized problems. Empty if not requested.
  DenseMatrix vectors;
};

/// Symmetric tridiagonal eigenproblem by implicit-shift QL. `diag` and `offdiag` (offdiag[0] unused,
/// offdiag[i] couples i-1 and i) are consumed. If `z` is non-null it must hold the transformation
/// accumulated so far and receives the eigenvectors.
void tridiagonal_ql(Vector& diag, Vector& offdiag, DenseMatrix* z);

/// Householder reduction of a symmetric matrix to tridiagonal form.
void householder_tridiagonalize(DenseMatrix& a, Vector& diag, Vector& offdiag, bool accumulate);

/// Standard symmetric eigenproblem A x = lambda x.
EigenDecomposition sym_eig(const DenseSymMatrix& a, bool want_vectors = true);

/// A U = M U Lambda with U^T M U = I. Cholesky-reduces M, then tridiagonalizes and runs QL.
/// Throws NotPositiveDefinite if M is not SPD.
EigenDecomposition sym_gevp(const DenseSymMatrix& a, const DenseSymMatrix& m, bool want_vectors = true);

enum class Extreme { Min, Max };

struct ExtremalOptions {
  double rtol = 1e-6;
  int max_iterations = 5000;
  std::uint64_t seed = 20170119;
};

/// Extreme eigenvalue of S x = lambda H x with S given only by its action (Lanczos with full
/// reorthogonalization in the H-inner product). Throws ConvergenceError with the last Ritz value.
double extremal_gevp(const LinearOperator& s, const DenseSymMatrix& h, Extreme which,
                     const ExtremalOptions& options = {});

}  // namespace tracenorm
