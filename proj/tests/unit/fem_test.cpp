#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "tracenorm/cholesky.hpp"
#include "tracenorm/eigen.hpp"
#include "tracenorm/fem.hpp"

using namespace tracenorm;
using namespace testing;

namespace {

MeshPtr share(SimplicialMesh m) { return std::make_shared<const SimplicialMesh>(std::move(m)); }

double matrix_sum(const CsrMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return s;
}

}  // namespace

TEST_CASE("fem: 1d local matrices") {
  const FunctionSpace v(share(interval_mesh(1)), Element::P1);
  const CsrMatrix m = assemble(v, FormKind::Mass).matrix;
  CHECK(m.at(0, 0) == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
  CHECK(m.at(0, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(m.at(1, 1) == doctest::Approx(2.0 / 6.0).epsilon(1e-15));

  const FunctionSpace v4(share(interval_mesh(4)), Element::P1);
  const CsrMatrix a = assemble(v4, FormKind::Stiffness).matrix;
  const Vector row_sums = spmv(a, Vector(5, 1.0));
  CHECK(norm_inf(row_sums) <= 1e-14);
  CHECK(a.at(1, 1) == doctest::Approx(8.0));
  CHECK(a.at(1, 2) == doctest::Approx(-4.0));
}

TEST_CASE("fem: mass totals and lumped row sums") {
  for (int dim : {1, 2, 3}) {
    const MeshPtr mesh = dim == 1 ? share(interval_mesh(7)) : dim == 2 ? share(square_mesh(5)) : share(cube_mesh(3));
    const FunctionSpace v(mesh, Element::P1);
    const CsrMatrix m = assemble(v, FormKind::Mass).matrix;
    CHECK(std::abs(matrix_sum(m) - 1.0) <= 1e-12);
    Vector lumped(v.dim(), 0.0);
    for (Index c = 0; c < mesh->num_cells(); ++c)
      for (Index p : mesh->cell(c)) lumped[p] += mesh->cell_measure(c) / (dim + 1);
    CHECK(max_diff(spmv(m, Vector(v.dim(), 1.0)), lumped) <= 1e-14);
    CHECK(m.is_symmetric());
  }
}

TEST_CASE("fem: stiffness kernel and definiteness") {
  const FunctionSpace v(share(cube_mesh(2)), Element::P1);
  const CsrMatrix a = assemble(v, FormKind::Stiffness).matrix;
  CHECK(norm_inf(spmv(a, Vector(v.dim(), 1.0))) <= 1e-13);
  const EigenDecomposition e = sym_eig(DenseSymMatrix::from_dense(a.to_dense()), false);
  CHECK(std::abs(e.values[0]) <= 1e-12);
  CHECK(e.values[1] > 1e-3);

  const CsrMatrix am = assemble(v, FormKind::StiffnessPlusMass).matrix;
  const EigenDecomposition em = sym_eig(DenseSymMatrix::from_dense(am.to_dense()), false);
  CHECK(em.values[0] > 0.0);
  const CsrMatrix sum = add(a, assemble(v, FormKind::Mass).matrix);
  CHECK(max_diff(sum.to_dense(), am.to_dense()) <= 1e-15);
}

TEST_CASE("fem: 3d Kuhn stiffness is the seven-point stencil") {
  const int n = 4;
  const double h = 1.0 / n;
  const FunctionSpace v(share(cube_mesh(n)), Element::P1);
  const CsrMatrix a = assemble(v, FormKind::Stiffness).matrix;
  const Index c = grid_vertex(n, 3, 2, 2, 2);
  CHECK(a.at(c, c) == doctest::Approx(6.0 * h));
  CHECK(a.at(c, grid_vertex(n, 3, 3, 2, 2)) == doctest::Approx(-h));
  CHECK(std::abs(a.at(c, grid_vertex(n, 3, 3, 3, 3))) <= 1e-15);
}

TEST_CASE("fem: P0 spaces") {
  const MeshPtr mesh = share(square_mesh(3));
  const FunctionSpace q(mesh, Element::P0);
  CHECK(q.dim() == mesh->num_cells());
  const CsrMatrix m = assemble(q, FormKind::Mass).matrix;
  CHECK(m.nnz() == static_cast<std::size_t>(q.dim()));
  CHECK(m.at(4, 4) == doctest::Approx(mesh->cell_measure(4)));
  CHECK_THROWS_AS(assemble(q, FormKind::Stiffness), Error);
  CHECK_THROWS_AS(q.boundary_dofs(), Error);
  const Point mid = mesh->cell_midpoint(2);
  CHECK(q.dof_point(2) == mid);
}

TEST_CASE("apply_dirichlet: 1d two-element Laplacian") {
  const FunctionSpace v(share(interval_mesh(2)), Element::P1);
  const AssembledForm a = assemble(v, FormKind::Stiffness);
  const std::vector<Index> fixed{0, 2};
  const AssembledForm c = apply_dirichlet(a, fixed);
  CHECK(c.matrix.at(1, 1) == doctest::Approx(2.0 / 0.5));
  CHECK(c.matrix.at(0, 0) == 1.0);
  CHECK(c.matrix.at(0, 1) == 0.0);
  CHECK(c.matrix.at(1, 0) == 0.0);
  CHECK(c.matrix.symmetry_defect() == 0.0);
  CHECK_THROWS_AS(apply_dirichlet(a, std::vector<Index>{3}), DimensionError);
}

TEST_CASE("apply_dirichlet: constrained solve matches the reduced system") {
  const FunctionSpace v(share(square_mesh(6)), Element::P1);
  const AssembledForm am = assemble(v, FormKind::StiffnessPlusMass);
  const std::vector<Index> bd = v.boundary_dofs();
  CHECK(bd.size() == 24);
  const Vector b = assemble_load(v, [](const Point& x) { return std::sin(3 * x[0]) + x[1]; });
  const Vector g = uniform_vector(static_cast<Index>(bd.size()), 3);

  const AssembledForm c = apply_dirichlet(am, bd);
  const Vector rhs = apply_dirichlet_rhs(am.matrix, bd, g, b);
  const Vector x = SparseCholesky(c.matrix).solve(rhs);

  const std::vector<Index> free = free_dofs(v.dim(), bd);
  const CsrMatrix aff = am.matrix.submatrix(free, free);
  const CsrMatrix afb = am.matrix.submatrix(free, bd);
  Vector reduced_rhs(free.size());
  const Vector lift = spmv(afb, g);
  for (std::size_t i = 0; i < free.size(); ++i) reduced_rhs[i] = b[free[i]] - lift[i];
  const Vector xr = dense_solve(aff.to_dense(), reduced_rhs);
  for (std::size_t i = 0; i < free.size(); ++i) CHECK(std::abs(x[free[i]] - xr[i]) <= 1e-12);
  for (std::size_t k = 0; k < bd.size(); ++k) CHECK(x[bd[k]] == doctest::Approx(g[k]));
}

TEST_CASE("error_norms: P1 reproduction and zero case") {
  const FunctionSpace v(share(cube_mesh(3)), Element::P1);
  auto lin = [](const Point& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2]; };
  auto grad = [](const Point&) { return Point{2.0, -1.0, 0.5}; };
  const ErrorNorms e = error_norms(v, interpolate(v, lin), lin, grad);
  CHECK(e.h1 <= 1e-12);
  CHECK(e.l2 <= 1e-12);

  const ErrorNorms z = error_norms(v, Vector(v.dim(), 0.0), [](const Point&) { return 0.0; },
                                   [](const Point&) { return Point{0, 0, 0}; });
  CHECK(z.l2 == 0.0);
  CHECK(z.h1 == 0.0);
}

TEST_CASE("error_norms: interpolation error halves per refinement") {
  const double pi = std::numbers::pi;
  auto u = [pi](const Point& x) { return std::cos(pi * x[0]) * std::cos(pi * x[1]); };
  auto gu = [pi](const Point& x) {
    return Point{-pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), -pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), 0.0};
  };
  std::vector<double> err;
  for (int n : {8, 16, 32, 64}) {
    const FunctionSpace v(share(square_mesh(n)), Element::P1);
    err.push_back(error_norms(v, interpolate(v, u), u, gu).h1);
  }
  for (std::size_t k = 1; k < err.size(); ++k) CHECK(err[k - 1] / err[k] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("fem: Galerkin reproduction of a discrete function") {
  const FunctionSpace v(share(cube_mesh(4)), Element::P1);
  const CsrMatrix am = assemble(v, FormKind::StiffnessPlusMass).matrix;
  const Vector f = uniform_vector(v.dim(), 8);
  const Vector rhs = spmv(am, f);
  const Vector u = SparseCholesky(am).solve(rhs);
  CHECK(max_diff(u, f) <= 1e-12);
}

TEST_CASE("fem: load vector integrates constants and linears exactly") {
  const FunctionSpace v(share(cube_mesh(3)), Element::P1);
  const Vector one = assemble_load(v, [](const Point&) { return 1.0; });
  double total = 0.0;
  for (double x : one) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  const Vector lin = assemble_load(v, [](const Point& x) { return x[0]; });
  double s = 0.0;
  for (double x : lin) s += x;
  CHECK(s == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("fem: quadrature rules integrate quadratics exactly") {
  for (int d : {1, 2, 3}) {
    double w = 0.0, q = 0.0;
    for (const QuadraturePoint& p : simplex_quadrature(d)) {
      w += p.weight;
      q += p.weight * p.barycentric[0] * p.barycentric[0];
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q == doctest::Approx(2.0 / ((d + 1) * (d + 2))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(simplex_quadrature(4), DimensionError);
}

TEST_CASE("fem: tangential gradients on an embedded segment") {
  const SimplicialMesh seg(1, 3, {{0, 0, 0}, {1, 1, 1}}, {0, 1});
  const auto g = barycentric_gradients(seg, 0);
  const double l2 = 3.0;
  for (int d = 0; d < 3; ++d) {
    CHECK(g[0][d] == doctest::Approx(-1.0 / l2));
    CHECK(g[1][d] == doctest::Approx(1.0 / l2));
  }
  const FunctionSpace q(std::make_shared<const SimplicialMesh>(seg), Element::P1);
  const CsrMatrix a = assemble(q, FormKind::Stiffness).matrix;
  CHECK(a.at(0, 0) == doctest::Approx(1.0 / std::sqrt(3.0)));
}
