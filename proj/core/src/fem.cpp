#include "tracenorm/fem.hpp"

#include <algorithm>
#include <cmath>

#include "tracenorm/error.hpp"

namespace tracenorm {

namespace {

const QuadraturePoint kRule1[] = {
    {{0.5 + 0.5 * 0.7745966692414834, 0.5 - 0.5 * 0.7745966692414834, 0, 0}, 5.0 / 18.0},
    {{0.5, 0.5, 0, 0}, 8.0 / 18.0},
    {{0.5 - 0.5 * 0.7745966692414834, 0.5 + 0.5 * 0.7745966692414834, 0, 0}, 5.0 / 18.0},
};
const QuadraturePoint kRule2[] = {
    {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 0}, 1.0 / 3.0},
    {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 0}, 1.0 / 3.0},
    {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 0}, 1.0 / 3.0},
};
constexpr double kTa = 0.5854101966249685, kTb = 0.1381966011250105;
const QuadraturePoint kRule3[] = {
    {{kTa, kTb, kTb, kTb}, 0.25},
    {{kTb, kTa, kTb, kTb}, 0.25},
    {{kTb, kTb, kTa, kTb}, 0.25},
    {{kTb, kTb, kTb, kTa}, 0.25},
};

Point point_at(const SimplicialMesh& m, Index c, const std::array<double, 4>& lam) {
  Point x{0.0, 0.0, 0.0};
  const auto vs = m.cell(c);
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (int r = 0; r < 3; ++r) x[r] += lam[a] * m.vertex(vs[a])[r];
  return x;
}

// CSR pattern of the vertex-adjacency graph induced by cells.
CsrMatrix p1_pattern(const SimplicialMesh& m) {
  const Index n = m.num_vertices();
  const int k = m.tdim() + 1;
  std::vector<Index> count(static_cast<std::size_t>(n) + 1, 0);
  for (Index c = 0; c < m.num_cells(); ++c)
    for (Index v : m.cell(c)) count[v + 1] += k;
  for (Index i = 0; i < n; ++i) count[i + 1] += count[i];
  std::vector<Index> cols(static_cast<std::size_t>(count[n]));
  std::vector<Index> fill(count.begin(), count.end() - 1);
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto vs = m.cell(c);
    for (Index a : vs)
      for (Index b : vs) cols[fill[a]++] = b;
  }
  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col_idx;
  col_idx.reserve(cols.size() / 4);
  for (Index i = 0; i < n; ++i) {
    auto first = cols.begin() + count[i], last = cols.begin() + count[i + 1];
    std::sort(first, last);
    last = std::unique(first, last);
    col_idx.insert(col_idx.end(), first, last);
    row_ptr[i + 1] = static_cast<Index>(col_idx.size());
  }
  std::vector<double> values(col_idx.size(), 0.0);
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace

FunctionSpace::FunctionSpace(MeshPtr mesh, Element element) : mesh_(std::move(mesh)), element_(element) {
  if (!mesh_) throw Error("FunctionSpace: null mesh");
}

Index FunctionSpace::dim() const noexcept {
  return element_ == Element::P1 ? mesh_->num_vertices() : mesh_->num_cells();
}

Point FunctionSpace::dof_point(Index dof) const {
  return element_ == Element::P1 ? mesh_->vertex(dof) : mesh_->cell_midpoint(dof);
}

std::vector<Index> FunctionSpace::boundary_dofs() const {
  if (element_ != Element::P1) throw Error("boundary_dofs: only defined for P1");
  return mesh_->boundary_vertices();
}

std::array<Point, 4> barycentric_gradients(const SimplicialMesh& m, Index c) {
  const int d = m.tdim();
  const auto vs = m.cell(c);
  const Point& p0 = m.vertex(vs[0]);
  double j[3][3] = {};
  for (int k = 0; k < d; ++k)
    for (int r = 0; r < 3; ++r) j[r][k] = m.vertex(vs[k + 1])[r] - p0[r];
  // G = J^T J, grads of lambda_k (k >= 1) are the columns of J G^{-1}.
  double g[3][3] = {};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int r = 0; r < 3; ++r) g[a][b] += j[r][a] * j[r][b];
  double gi[3][3] = {};
  if (d == 1) {
    gi[0][0] = 1.0 / g[0][0];
  } else if (d == 2) {
    const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    gi[0][0] = g[1][1] / det;
    gi[1][1] = g[0][0] / det;
    gi[0][1] = gi[1][0] = -g[0][1] / det;
  } else {
    const double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                       g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                       g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) {
        const int r1 = (s + 1) % 3, r2 = (s + 2) % 3, s1 = (r + 1) % 3, s2 = (r + 2) % 3;
        gi[r][s] = (g[r1][s1] * g[r2][s2] - g[r1][s2] * g[r2][s1]) / det;
      }
  }
  std::array<Point, 4> grads{};
  for (int k = 0; k < d; ++k)
    for (int r = 0; r < 3; ++r) {
      double v = 0.0;
      for (int q = 0; q < d; ++q) v += j[r][q] * gi[q][k];
      grads[k + 1][r] = v;
      grads[0][r] -= v;
    }
  return grads;
}

std::span<const QuadraturePoint> simplex_quadrature(int d) {
  switch (d) {
    case 1: return kRule1;
    case 2: return kRule2;
    case 3: return kRule3;
  }
  throw DimensionError("simplex_quadrature: dimension must be 1, 2 or 3");
}

AssembledForm assemble(const FunctionSpace& space, FormKind kind) {
  const SimplicialMesh& m = space.mesh();
  if (space.element() == Element::P0) {
    if (kind != FormKind::Mass) throw Error("assemble: stiffness is not defined for P0 elements");
    Vector d(static_cast<std::size_t>(m.num_cells()));
    for (Index c = 0; c < m.num_cells(); ++c) d[c] = m.cell_measure(c);
    return {CsrMatrix::diagonal(d), kind};
  }
  CsrMatrix a = p1_pattern(m);
  const auto row_ptr = a.row_ptr();
  const auto col_idx = a.col_idx();
  std::vector<double> vals(a.nnz(), 0.0);
  const int d = m.tdim();
  const bool want_k = kind != FormKind::Mass;
  const bool want_m = kind != FormKind::Stiffness;
  const double mass_scale = 1.0 / ((d + 1) * (d + 2));
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto vs = m.cell(c);
    const double vol = m.cell_measure(c);
    std::array<Point, 4> grads{};
    if (want_k) grads = barycentric_gradients(m, c);
    for (int p = 0; p <= d; ++p) {
      const Index row = vs[p];
      const auto first = col_idx.begin() + row_ptr[row];
      const auto last = col_idx.begin() + row_ptr[row + 1];
      for (int q = 0; q <= d; ++q) {
        double v = 0.0;
        if (want_k) v += vol * (grads[p][0] * grads[q][0] + grads[p][1] * grads[q][1] + grads[p][2] * grads[q][2]);
        if (want_m) v += vol * mass_scale * (p == q ? 2.0 : 1.0);
        const auto it = std::lower_bound(first, last, vs[q]);
        vals[static_cast<std::size_t>(it - col_idx.begin())] += v;
      }
    }
  }
  std::vector<Index> rp(row_ptr.begin(), row_ptr.end()), ci(col_idx.begin(), col_idx.end());
  return {CsrMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(vals)), kind};
}

std::vector<Index> free_dofs(Index n, std::span<const Index> dofs) {
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (Index d : dofs) {
    if (d < 0 || d >= n) throw DimensionError("free_dofs: dof out of range");
    fixed[d] = 1;
  }
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (!fixed[i]) out.push_back(i);
  return out;
}

AssembledForm apply_dirichlet(const AssembledForm& form, std::span<const Index> dofs) {
  const CsrMatrix& a = form.matrix;
  std::vector<char> fixed(static_cast<std::size_t>(a.rows()), 0);
  for (Index d : dofs) {
    if (d < 0 || d >= a.rows()) throw DimensionError("apply_dirichlet: dof out of range");
    fixed[d] = 1;
  }
  std::vector<Index> rp(a.row_ptr().begin(), a.row_ptr().end()), ci(a.col_idx().begin(), a.col_idx().end());
  std::vector<double> v(a.values().begin(), a.values().end());
  bool missing_diagonal = false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      const Index j = ci[k];
      if (fixed[i] || fixed[j]) v[k] = i == j ? 1.0 : 0.0;
    }
  for (Index d : dofs)
    if (a.at(d, d) == 0.0 && std::find(ci.begin() + rp[d], ci.begin() + rp[d + 1], d) == ci.begin() + rp[d + 1])
      missing_diagonal = true;
  CsrMatrix out(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(v));
  if (missing_diagonal) {
    std::vector<double> ones(static_cast<std::size_t>(a.rows()), 0.0);
    for (Index d : dofs)
      if (out.at(d, d) == 0.0) ones[d] = 1.0;
    out = add(out, CsrMatrix::diagonal(ones));
  }
  return {std::move(out), form.kind};
}

Vector apply_dirichlet_rhs(const CsrMatrix& original, std::span<const Index> dofs, std::span<const double> g,
                           std::span<const double> b) {
  if (g.size() != dofs.size()) throw DimensionError("apply_dirichlet_rhs: one value per constrained dof");
  if (b.size() != static_cast<std::size_t>(original.rows())) throw DimensionError("apply_dirichlet_rhs: rhs size");
  Vector lift(b.size(), 0.0);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (dofs[k] < 0 || dofs[k] >= original.rows()) throw DimensionError("apply_dirichlet_rhs: dof out of range");
    lift[dofs[k]] = g[k];
  }
  Vector out(b.begin(), b.end());
  const Vector al = spmv(original, lift);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= al[i];
  for (std::size_t k = 0; k < dofs.size(); ++k) out[dofs[k]] = g[k];
  return out;
}

ErrorNorms error_norms(const FunctionSpace& space, std::span<const double> coeffs, const ScalarField& exact,
                       const VectorField& exact_gradient) {
  if (coeffs.size() != static_cast<std::size_t>(space.dim())) throw DimensionError("error_norms: coefficient size");
  const SimplicialMesh& m = space.mesh();
  const int d = m.tdim();
  const auto rule = simplex_quadrature(d);
  double l2 = 0.0, h1 = 0.0;
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto vs = m.cell(c);
    const double vol = m.cell_measure(c);
    Point grad_h{0.0, 0.0, 0.0};
    if (space.element() == Element::P1) {
      const auto grads = barycentric_gradients(m, c);
      for (int a = 0; a <= d; ++a)
        for (int r = 0; r < 3; ++r) grad_h[r] += coeffs[vs[a]] * grads[a][r];
    }
    for (const auto& qp : rule) {
      const Point x = point_at(m, c, qp.barycentric);
      double uh = 0.0;
      if (space.element() == Element::P1)
        for (int a = 0; a <= d; ++a) uh += coeffs[vs[a]] * qp.barycentric[a];
      else
        uh = coeffs[c];
      const double e = exact(x) - uh;
      l2 += qp.weight * vol * e * e;
      const Point ge = exact_gradient(x);
      for (int r = 0; r < 3; ++r) h1 += qp.weight * vol * (ge[r] - grad_h[r]) * (ge[r] - grad_h[r]);
    }
  }
  return {std::sqrt(l2), std::sqrt(h1), std::sqrt(l2 + h1)};
}

Vector interpolate(const FunctionSpace& space, const ScalarField& f) {
  Vector out(static_cast<std::size_t>(space.dim()));
  for (Index i = 0; i < space.dim(); ++i) out[i] = f(space.dof_point(i));
  return out;
}

Vector assemble_load(const FunctionSpace& space, const ScalarField& f) {
  const SimplicialMesh& m = space.mesh();
  const int d = m.tdim();
  const auto rule = simplex_quadrature(d);
  Vector b(static_cast<std::size_t>(space.dim()), 0.0);
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto vs = m.cell(c);
    const double vol = m.cell_measure(c);
    for (const auto& qp : rule) {
      const double fx = f(point_at(m, c, qp.barycentric)) * qp.weight * vol;
      if (space.element() == Element::P1)
        for (int a = 0; a <= d; ++a) b[vs[a]] += fx * qp.barycentric[a];
      else
        b[c] += fx;
    }
  }
  return b;
}

}  // namespace tracenorm
