#pragma once

#include <memory>
#include <optional>

#include "tracenorm/eigen.hpp"
#include "tracenorm/fem.hpp"

namespace tracenorm {

enum class BoundaryVariant { Neumann, Dirichlet };

struct FracnormOptions {
  /// Dirichlet variant: use stiffness + mass instead of stiffness alone.
  bool dirichlet_with_mass = false;
  /// Replaces the default operator A (full dof size; restricted to the active dofs).
  std::optional<CsrMatrix> operator_override;
};

/// Operator A for P0 functions on a curve: two-point flux differences between neighbouring
/// segments (plus a boundary flux at endpoints for the Dirichlet variant).
CsrMatrix p0_curve_stiffness(const SimplicialMesh& curve, BoundaryVariant variant);

/// Generalized eigendecomposition A U = M U Lambda on the active dofs of Q. Shared by all exponents.
class HilbertScale {
 public:
  HilbertScale(const FunctionSpace& q, BoundaryVariant variant, const FracnormOptions& options = {});

  BoundaryVariant variant() const noexcept { return variant_; }
  Index full_dim() const noexcept { return full_dim_; }
  Index dim() const noexcept { return static_cast<Index>(active_.size()); }
  /// Dofs carrying the norm: all for Neumann, the non-endpoint dofs for P1 Dirichlet.
  const std::vector<Index>& active_dofs() const noexcept { return active_; }
  const Vector& eigenvalues() const noexcept { return eig_.values; }
  const DenseMatrix& eigenvectors() const noexcept { return eig_.vectors; }
  const DenseSymMatrix& a() const noexcept { return a_; }
  const DenseSymMatrix& m() const noexcept { return m_; }

  /// (MU) Lambda^s (MU)^T
  DenseSymMatrix matrix(double s) const;
  /// U Lambda^{-s} U^T, the inverse of matrix(s).
  DenseSymMatrix inverse_matrix(double s) const;
  /// Coefficients c = U^T M u.
  Vector coefficients(std::span<const double> u) const;

 private:
  BoundaryVariant variant_;
  Index full_dim_ = 0;
  std::vector<Index> active_;
  DenseSymMatrix a_;
  DenseSymMatrix m_;
  EigenDecomposition eig_;
  DenseMatrix mu_;
};

/// Discrete H^s norm on a curve space, s in [-1, 1].
class FractionalNorm {
 public:
  FractionalNorm(std::shared_ptr<const HilbertScale> scale, double s);

  double s() const noexcept { return s_; }
  const HilbertScale& scale() const noexcept { return *scale_; }
  const std::shared_ptr<const HilbertScale>& scale_ptr() const noexcept { return scale_; }
  const DenseSymMatrix& matrix() const noexcept { return h_; }
  const std::vector<Index>& active_dofs() const noexcept { return scale_->active_dofs(); }
  Index dim() const noexcept { return scale_->dim(); }

  /// sqrt(u^T H_s u), u given on the active dofs.
  double norm(std::span<const double> u) const;
  /// sqrt(c^T Lambda^s c) with c = U^T M u.
  double norm_spectral(std::span<const double> u) const;

  FractionalNorm with_exponent(double s) const { return FractionalNorm(scale_, s); }
  /// Exact inverse of H_s through the eigendecomposition.
  LinearOperator inverse_operator() const;

 private:
  std::shared_ptr<const HilbertScale> scale_;
  double s_;
  DenseSymMatrix h_;
};

FractionalNorm build_fracnorm(const FunctionSpace& q, double s, BoundaryVariant variant,
                              const FracnormOptions& options = {});

/// (H_a + H_b)^{-1} by dense Cholesky of the sum.
class SumNormInverse {
 public:
  SumNormInverse(const FractionalNorm& a, const FractionalNorm& b);

  Index dim() const noexcept { return chol_->order(); }
  const DenseSymMatrix& sum() const noexcept { return sum_; }
  void apply(std::span<const double> x, std::span<double> y) const;
  LinearOperator as_operator() const;

 private:
  DenseSymMatrix sum_;
  std::shared_ptr<const DenseCholesky> chol_;
};

}  // namespace tracenorm
