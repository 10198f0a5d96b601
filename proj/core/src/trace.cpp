#include "tracenorm/trace.hpp"

#include <algorithm>

#include "tracenorm/cholesky.hpp"
#include "tracenorm/eigen.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/random.hpp"

namespace tracenorm {

namespace {

constexpr double kSnap = 1e-13;

void check_pair(const FunctionSpace& v, const FunctionSpace& q) {
  if (v.element() != Element::P1) throw Error("trace: V must be a P1 space");
  if (v.mesh().tdim() != v.mesh().gdim()) throw Error("trace: V must live on a full-dimensional mesh");
  if (q.mesh().tdim() != 1) throw Error("trace: Q must live on a curve mesh");
  if (q.mesh().gdim() != v.mesh().gdim()) throw DimensionError("trace: curve and domain dimensions differ");
}

// Value of the V function u at x.
double evaluate(const FunctionSpace& v, std::span<const double> u, const Point& x) {
  const auto loc = locate_point(v.mesh(), x);
  const auto vs = v.mesh().cell(loc.cell);
  double s = 0.0;
  for (std::size_t a = 0; a < vs.size(); ++a) s += loc.barycentric[a] * u[vs[a]];
  return s;
}

}  // namespace

TraceMatrix interpolation_trace(const FunctionSpace& v, const FunctionSpace& q) {
  check_pair(v, q);
  const SimplicialMesh& host = v.mesh();
  std::vector<Triplet> t;
  for (Index i = 0; i < q.dim(); ++i) {
    const auto loc = locate_point(host, q.dof_point(i));
    auto lam = loc.barycentric;
    double sum = 0.0;
    for (int a = 0; a <= host.tdim(); ++a) {
      if (lam[a] < kSnap) lam[a] = 0.0;
      sum += lam[a];
    }
    const auto vs = host.cell(loc.cell);
    for (int a = 0; a <= host.tdim(); ++a)
      if (lam[a] > 0.0) t.push_back({i, vs[a], lam[a] / sum});
  }
  TraceMatrix out;
  out.interpolation = CsrMatrix::from_triplets(q.dim(), v.dim(), std::move(t));
  out.q_mass = assemble(q, FormKind::Mass).matrix;
  out.coupled = out.q_mass.multiply(out.interpolation);
  return out;
}

Vector projection_trace(const FunctionSpace& v, const FunctionSpace& q, const CsrMatrix& q_mass,
                        std::span<const double> u) {
  check_pair(v, q);
  const SimplicialMesh& cm = q.mesh();
  const auto rule = simplex_quadrature(1);
  Vector b(static_cast<std::size_t>(q.dim()), 0.0);
  for (Index c = 0; c < cm.num_cells(); ++c) {
    const auto vs = cm.cell(c);
    const double len = cm.cell_measure(c);
    for (const auto& qp : rule) {
      Point x{0.0, 0.0, 0.0};
      for (int a = 0; a < 2; ++a)
        for (int r = 0; r < 3; ++r) x[r] += qp.barycentric[a] * cm.vertex(vs[a])[r];
      const double val = evaluate(v, u, x) * qp.weight * len;
      if (q.element() == Element::P1)
        for (int a = 0; a < 2; ++a) b[vs[a]] += val * qp.barycentric[a];
      else
        b[c] += val;
    }
  }
  return SparseCholesky(q_mass).solve(b);
}

double check_projection_equivalence(const FunctionSpace& v, const FunctionSpace& q, int trials, std::uint64_t seed) {
  const TraceMatrix tr = interpolation_trace(v, q);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const Vector u = uniform_vector(v.dim(), seed + static_cast<std::uint64_t>(k));
    const Vector p = spmv(tr.interpolation, u);
    const Vector pt = projection_trace(v, q, tr.q_mass, u);
    for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(p[i] - pt[i]));
  }
  return worst;
}

bool rank_check(const CsrMatrix& t, double rtol) {
  if (t.rows() > t.cols()) return false;
  const CsrMatrix ttt = t.multiply(t.transpose());
  const auto eig = sym_eig(DenseSymMatrix::from_dense(ttt.to_dense()), false);
  if (eig.values.empty()) return true;
  return eig.values.front() > rtol * eig.values.back();
}

}  // namespace tracenorm
