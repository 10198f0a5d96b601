#pragma once

#include <cstdint>
#include <memory>

#include "tracenorm/curve.hpp"
#include "tracenorm/fracnorm.hpp"
#include "tracenorm/krylov.hpp"
#include "tracenorm/multigrid.hpp"
#include "tracenorm/report.hpp"
#include "tracenorm/trace.hpp"

namespace tracenorm {

/// Block saddle-point system with its block-diagonal preconditioner.
struct SaddleSystem {
  CsrMatrix matrix;
  Vector rhs;
  std::vector<Index> block_sizes;
  BlockPreconditioner preconditioner;
  Index dim_v = 0;
  Index dim_w = 0;
  Index dim_q = 0;
  /// Seconds spent in factorizations while building the preconditioner.
  double setup_seconds = 0.0;

  std::span<const double> block(std::span<const double> x, std::size_t b) const;
};

struct DomainBlockOptions {
  /// Use one V-cycle of this hierarchy for the domain block instead of an exact Cholesky solve.
  std::shared_ptr<const GmgHierarchy> multigrid;
};

/// [[A+M, B^T], [B, 0]] with B = M_Q T; preconditioner diag((A+M)^{-1}, H_s^{-1}).
/// f is the assembled domain load, g the assembled curve data (g, q)_Gamma.
SaddleSystem build_babuska(const FunctionSpace& v, const FunctionSpace& q, const TraceMatrix& trace,
                           const FractionalNorm& norm, std::span<const double> f, std::span<const double> g,
                           const DomainBlockOptions& options = {});

/// [[A+M, 0, B^T], [0, A_G+M_G, -M_G], [B, -M_G, 0]]; preconditioner
/// diag((A+M)^{-1}, (A_G+M_G)^{-1}, (H_a + H_b)^{-1}). W must be the same space as Q.
SaddleSystem build_coupled(const FunctionSpace& v, const FunctionSpace& w, const FunctionSpace& q,
                           const TraceMatrix& trace, const FractionalNorm& norm_a, const FractionalNorm& norm_b,
                           std::span<const double> f, std::span<const double> g, std::span<const double> h,
                           const DomainBlockOptions& options = {});

struct NonmatchingOptions {
  /// Build even when the curve is finer than the domain mesh (h >= H).
  bool allow_ratio_violation = false;
  DomainBlockOptions domain;
};

/// Babuska system on independently meshed domain and curve. Requires check_infsup_ratio < 1.
SaddleSystem build_nonmatching(const FunctionSpace& v, const FunctionSpace& q, const EmbeddedCurve& curve,
                               const TraceMatrix& trace, const FractionalNorm& norm, std::span<const double> f,
                               std::span<const double> g, const NonmatchingOptions& options = {});

MinresResult solve(const SaddleSystem& system, const MinresOptions& options = {});

/// Low-frequency cosine expansion sum c_abc cos(a pi x) cos(b pi y) cos(c pi z), a,b,c <= max_frequency,
/// coefficients uniform in [-1, 1].
ScalarField random_smooth_field(std::uint64_t seed, int max_frequency = 2);

/// Curve load (f, psi_i)_Gamma for the basis of Q by 3-point Gauss quadrature per segment.
Vector curve_load(const FunctionSpace& q, const ScalarField& f);
/// (p, v_j)_Gamma for the basis of V on the domain, integrating along the curve mesh.
Vector curve_load_on_domain(const FunctionSpace& v, const SimplicialMesh& curve, const ScalarField& p);

struct ManufacturedCase {
  ScalarField u;
  VectorField grad_u;
  /// -Laplace(u) + u
  ScalarField f;
  ScalarField p;
};

/// u = cos(pi x) cos(pi y) on the unit square, p = 1 + sin(2 theta) around (1/2, 1/2).
ManufacturedCase circle_manufactured_case();

struct ManufacturedOptions {
  Element q_element = Element::P1;
  std::vector<int> levels{1, 2, 3, 4};
  MinresOptions minres;
};

/// Cells per axis of the square mesh at a 2d nonmatching level: 2^(level + 5); the circle has half
/// as many segments.
int nonmatching_2d_cells(int level);

/// One row of the manufactured study (columns of iteration_columns()).
std::vector<ReportCell> manufactured_level(int level, Element q_element, const MinresOptions& minres);

/// Columns: experiment, curve, element, s, level, n, dimV, dimW, dimQ, iterations, errH1, errQs, seed.
StudyReport manufactured_convergence(const ManufacturedOptions& options);

/// Column set shared by the iteration-count experiments.
std::vector<std::string> iteration_columns();

}  // namespace tracenorm
