#include "tracenorm/schur_study.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "tracenorm/cholesky.hpp"
#include "tracenorm/eigen.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/fracnorm.hpp"
#include "tracenorm/iterative.hpp"

namespace tracenorm {

SchurComplement schur_complement(const CsrMatrix& a, const CsrMatrix& b, const InnerSolverOptions& inner) {
  if (a.rows() != a.cols() || b.cols() != a.rows()) throw DimensionError("schur_complement: block sizes");
  const Index m = b.rows();
  const Index n = a.rows();
  std::unique_ptr<SparseCholesky> chol;
  if (inner.solver == InnerSolver::Cholesky) chol = std::make_unique<SparseCholesky>(a);
  const CsrMatrix bt = b.transpose();
  const LinearOperator aop = a.as_operator();

  DenseMatrix full(m, m);
  Vector col(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(m), 0.0);
  Vector sc(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    e[j] = 1.0;
    bt.multiply(e, col);
    e[j] = 0.0;
    try {
      if (chol)
        chol->solve(col, z);
      else
        z = cg_solve(aop, col, {inner.cg_rtol, 0}).x;
    } catch (const Error& err) {
      throw Error("schur_complement: inner solve failed for column " + std::to_string(j) + ": " + err.what());
    }
    b.multiply(z, sc);
    for (Index i = 0; i < m; ++i) full(i, j) = sc[i];
  }
  SchurComplement out;
  double defect = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < i; ++j) defect = std::max(defect, std::abs(full(i, j) - full(j, i)));
  const double scale = full.max_abs();
  out.symmetry_defect = scale > 0.0 ? defect / scale : 0.0;
  out.matrix = DenseSymMatrix::from_dense(full);
  return out;
}

TraceProblem build_trace_problem(const FunctionSpace& v, const FunctionSpace& q, const TraceMatrix& trace) {
  if (q.element() != Element::P1) throw Error("trace problem: the multiplier space must be P1");
  TraceProblem p;
  p.domain_dofs = free_dofs(v.dim(), v.boundary_dofs());
  std::vector<Index> ends = EmbeddedCurve{CurveKind::Gamma1, q.mesh_ptr(), {}}.endpoints();
  p.curve_dofs = free_dofs(q.dim(), ends);
  const CsrMatrix k = assemble(v, FormKind::Stiffness).matrix;
  p.a = k.submatrix(p.domain_dofs, p.domain_dofs);
  p.b = trace.coupled.submatrix(p.curve_dofs, p.domain_dofs);
  return p;
}

SchurComplement assemble_schur(const FunctionSpace& v, const FunctionSpace& q, const TraceMatrix& trace,
                               const InnerSolverOptions& inner) {
  const TraceProblem p = build_trace_problem(v, q, trace);
  return schur_complement(p.a, p.b, inner);
}

int uniform_cells(int level) {
  if (level < 0 || level > 7) throw Error("refinement level " + std::to_string(level) + " out of range");
  return 1 << (level + 3);
}

StudyReport condition_study(const SchurStudyConfig& config) {
  StudyReport report("fem-cond", {"curve", "s", "level", "dimV", "dimQ", "lambda_min", "lambda_max", "kappa"});
  for (double s : config.s_values)
    if (s < -0.5 || s > 0.0) throw Error("condition_study: s values must lie in [-0.5, 0]");
  for (int level : config.levels) {
    const int n = uniform_cells(level);
    auto mesh = std::make_shared<const SimplicialMesh>(cube_mesh(n));
    const EmbeddedCurve curve = matched_curve(*mesh, config.curve);
    const FunctionSpace v(mesh, Element::P1);
    const FunctionSpace q(curve.mesh, Element::P1);
    const TraceMatrix trace = interpolation_trace(v, q);
    const SchurComplement schur = assemble_schur(v, q, trace, config.inner);
    FracnormOptions fo;
    fo.dirichlet_with_mass = config.dirichlet_with_mass;
    const auto scale = std::make_shared<const HilbertScale>(q, BoundaryVariant::Dirichlet, fo);
    for (double s : config.s_values) {
      const FractionalNorm h(scale, s);
      const auto eig = sym_gevp(schur.matrix, h.matrix(), false);
      const double lo = eig.values.front(), hi = eig.values.back();
      report.add_row({std::string(to_string(config.curve)), s, static_cast<std::int64_t>(level),
                      static_cast<std::int64_t>(v.dim()), static_cast<std::int64_t>(q.dim()), lo, hi, hi / lo});
    }
  }
  // Order rows by s, then level.
  std::vector<std::size_t> idx(report.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return report.number(x, "s") < report.number(y, "s"); });
  StudyReport sorted(report.experiment(), report.columns());
  for (std::size_t i : idx) sorted.add_row(report.row(i));
  return sorted;
}

}  // namespace tracenorm
