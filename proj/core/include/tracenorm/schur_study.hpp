#pragma once

#include <optional>
#include <vector>

#include "tracenorm/curve.hpp"
#include "tracenorm/dense.hpp"
#include "tracenorm/report.hpp"
#include "tracenorm/trace.hpp"

namespace tracenorm {

enum class InnerSolver { Cholesky, Cg };

struct InnerSolverOptions {
  InnerSolver solver = InnerSolver::Cholesky;
  double cg_rtol = 1e-15;
};

struct SchurComplement {
  DenseSymMatrix matrix;
  /// ||S - S^T||_max / ||S||_max before symmetrization.
  double symmetry_defect = 0.0;
};

/// S = B A^{-1} B^T, one inner solve per row of B. A must be SPD.
SchurComplement schur_complement(const CsrMatrix& a, const CsrMatrix& b, const InnerSolverOptions& inner = {});

struct TraceProblem {
  /// Stiffness on the interior vertices of the domain (Dirichlet conditions eliminated).
  CsrMatrix a;
  /// Coupling block restricted to interior curve dofs and interior domain vertices.
  CsrMatrix b;
  std::vector<Index> domain_dofs;
  std::vector<Index> curve_dofs;
};

/// Trace-constrained Laplace problem on a matched curve with homogeneous Dirichlet data on both
/// the domain boundary and the curve endpoints.
TraceProblem build_trace_problem(const FunctionSpace& v, const FunctionSpace& q, const TraceMatrix& trace);

SchurComplement assemble_schur(const FunctionSpace& v, const FunctionSpace& q, const TraceMatrix& trace,
                               const InnerSolverOptions& inner = {});

struct SchurStudyConfig {
  CurveKind curve = CurveKind::Gamma1;
  std::vector<int> levels{1, 2, 3};
  std::vector<double> s_values{-0.14};
  InnerSolverOptions inner;
  bool dirichlet_with_mass = false;
};

/// Cells per axis of the uniform cube mesh at a refinement level: 2^(level + 3).
int uniform_cells(int level);

/// Columns: curve, s, level, dimV, dimQ, lambda_min, lambda_max, kappa.
StudyReport condition_study(const SchurStudyConfig& config);

}  // namespace tracenorm
