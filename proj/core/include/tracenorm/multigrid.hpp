#pragma once

#include <memory>
#include <vector>

#include "tracenorm/cholesky.hpp"
#include "tracenorm/fem.hpp"

namespace tracenorm {

struct MultigridOptions {
  FormKind form = FormKind::StiffnessPlusMass;
  double omega = 2.0 / 3.0;
  int pre_smoothing = 1;
  int post_smoothing = 1;
};

/// Geometric multigrid on nested P1 meshes: damped Jacobi V-cycle with interpolation transfer and an
/// exact solve on the coarsest level.
class GmgHierarchy {
 public:
  /// Meshes ordered coarse to fine; each must be nested in the next.
  explicit GmgHierarchy(std::vector<MeshPtr> meshes, const MultigridOptions& options = {});

  int levels() const noexcept { return static_cast<int>(matrices_.size()); }
  Index size() const noexcept { return matrices_.back().rows(); }
  const CsrMatrix& matrix(int level) const { return matrices_.at(level); }
  /// Interpolation from level-1 to level (level >= 1).
  const CsrMatrix& prolongation(int level) const { return prolongations_.at(level - 1); }

  /// x = V-cycle applied to b (zero initial guess).
  void apply(std::span<const double> b, std::span<double> x) const;
  /// The hierarchy must outlive the returned operator.
  LinearOperator as_operator() const;

 private:
  void cycle(int level, std::span<const double> b, std::span<double> x) const;

  MultigridOptions options_;
  std::vector<CsrMatrix> matrices_;
  std::vector<Vector> inv_diag_;
  std::vector<CsrMatrix> prolongations_;
  std::vector<CsrMatrix> restrictions_;
  std::unique_ptr<SparseCholesky> coarse_;
};

/// P1 interpolation matrix from `coarse` to `fine`; throws if a fine cell straddles coarse cells.
CsrMatrix p1_prolongation(const SimplicialMesh& coarse, const SimplicialMesh& fine);

/// Structured hierarchy of `levels` meshes ending at `finest_cells` per axis (halving each step).
std::vector<MeshPtr> uniform_hierarchy(int dim, int finest_cells, int levels);

}  // namespace tracenorm
