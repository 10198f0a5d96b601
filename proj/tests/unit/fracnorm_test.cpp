#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tracenorm/curve.hpp"
#include "tracenorm/fracnorm.hpp"

using namespace tracenorm;
using namespace testing;

namespace {

MeshPtr share(SimplicialMesh m) { return std::make_shared<const SimplicialMesh>(std::move(m)); }

double rel_diff(const DenseSymMatrix& a, const DenseSymMatrix& b) { return max_diff(a, b) / b.max_abs(); }

DenseSymMatrix dense_of(const CsrMatrix& a) { return DenseSymMatrix::from_dense(a.to_dense()); }

FunctionSpace gamma2_space(int n) {
  const SimplicialMesh host = cube_mesh(n);
  return FunctionSpace(matched_curve(host, CurveKind::Gamma2).mesh, Element::P1);
}

DenseSymMatrix product(const DenseSymMatrix& a, const DenseMatrix& b, const DenseSymMatrix& c) {
  const DenseMatrix r = a.to_dense() * b * c.to_dense();
  return DenseSymMatrix::from_dense(r);
}

DenseMatrix inverse(const DenseSymMatrix& m) {
  const DenseCholesky chol(m);
  DenseMatrix inv = DenseMatrix::identity(m.order());
  for (Index j = 0; j < m.order(); ++j) chol.solve_in_place(inv.column(j));
  return inv;
}

}  // namespace

TEST_CASE("fracnorm: H_0 = M and H_1 = A") {
  const FunctionSpace q = gamma2_space(12);
  const FractionalNorm h0 = build_fracnorm(q, 0.0, BoundaryVariant::Neumann);
  const FractionalNorm h1 = h0.with_exponent(1.0);
  CHECK(rel_diff(h0.matrix(), dense_of(assemble(q, FormKind::Mass).matrix)) <= 1e-10);
  CHECK(rel_diff(h1.matrix(), dense_of(assemble(q, FormKind::StiffnessPlusMass).matrix)) <= 1e-10);

  const FractionalNorm d1 = build_fracnorm(q, 1.0, BoundaryVariant::Dirichlet);
  const std::vector<Index>& act = d1.active_dofs();
  CHECK(act.size() == static_cast<std::size_t>(q.dim() - 2));
  const CsrMatrix a = assemble(q, FormKind::Stiffness).matrix.submatrix(act, act);
  CHECK(rel_diff(d1.matrix(), dense_of(a)) <= 1e-10);

  FracnormOptions with_mass;
  with_mass.dirichlet_with_mass = true;
  const FractionalNorm dm = build_fracnorm(q, 1.0, BoundaryVariant::Dirichlet, with_mass);
  const CsrMatrix am = assemble(q, FormKind::StiffnessPlusMass).matrix.submatrix(act, act);
  CHECK(rel_diff(dm.matrix(), dense_of(am)) <= 1e-10);
}

TEST_CASE("fracnorm: unequal segment masses") {
  const FunctionSpace q0(share(SimplicialMesh(1, 1, {{0, 0, 0}, {1, 0, 0}, {3, 0, 0}}, {0, 1, 1, 2})), Element::P0);
  FracnormOptions o;
  o.operator_override = CsrMatrix::diagonal(Vector{1.0, 8.0});
  const FractionalNorm h(std::make_shared<const HilbertScale>(q0, BoundaryVariant::Neumann, o), 0.5);
  CHECK(h.scale().eigenvalues()[0] == doctest::Approx(1.0));
  CHECK(h.scale().eigenvalues()[1] == doctest::Approx(4.0));
  CHECK(h.matrix()(0, 0) == doctest::Approx(1.0));
  CHECK(h.matrix()(1, 1) == doctest::Approx(4.0));
  CHECK(std::abs(h.matrix()(1, 0)) <= 1e-14);
}

TEST_CASE("fracnorm: identity-mass hand system gives diag(1, 2)") {
  const FunctionSpace q0(share(SimplicialMesh(1, 1, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {0, 1, 1, 2})), Element::P0);
  FracnormOptions o;
  o.operator_override = CsrMatrix::diagonal(Vector{1.0, 4.0});
  const FractionalNorm h(std::make_shared<const HilbertScale>(q0, BoundaryVariant::Neumann, o), 0.5);
  CHECK(h.matrix()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(h.matrix()(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(h.matrix()(1, 0)) <= 1e-14);
}

TEST_CASE("fracnorm: exponent range and closed curves") {
  const FunctionSpace q = gamma2_space(4);
  CHECK_THROWS_AS(build_fracnorm(q, 1.5, BoundaryVariant::Neumann), Error);
  CHECK_THROWS_AS(build_fracnorm(q, -1.01, BoundaryVariant::Neumann), Error);
  const FunctionSpace loop(independent_curve(CurveKind::SquareLoop, 8).mesh, Element::P1);
  CHECK_THROWS_AS(build_fracnorm(loop, -0.5, BoundaryVariant::Dirichlet), Error);
  CHECK_NOTHROW(build_fracnorm(loop, -0.5, BoundaryVariant::Neumann));
}

TEST_CASE("fracnorm: SPD for all exponents") {
  const FunctionSpace q = gamma2_space(10);
  for (double s : {-1.0, -0.5, -0.14, 0.0, 0.3, 1.0}) {
    const FractionalNorm h = build_fracnorm(q, s, BoundaryVariant::Neumann);
    const EigenDecomposition e = sym_eig(h.matrix(), false);
    CHECK(e.values.front() > 1e-10 * e.values.back());
  }
}

TEST_CASE("s_norm: zero, L2 and eigenvector cases") {
  const FunctionSpace q = gamma2_space(10);
  auto scale = std::make_shared<const HilbertScale>(q, BoundaryVariant::Neumann);
  const FractionalNorm h(scale, -0.3);
  CHECK(h.norm(Vector(q.dim(), 0.0)) == 0.0);

  const Vector u = uniform_vector(q.dim(), 4);
  const FractionalNorm h0(scale, 0.0);
  CHECK(h0.norm(u) == doctest::Approx(std::sqrt(scale->m().quadratic_form(u))).epsilon(1e-12));

  for (double s : {-0.5, -0.14, 0.4}) {
    const FractionalNorm hs(scale, s);
    CHECK(std::abs(hs.norm(u) - hs.norm_spectral(u)) <= 1e-10 * hs.norm(u));
    for (Index k = 0; k < scale->dim(); ++k) {
      const auto phi = scale->eigenvectors().column(k);
      const double expected = std::pow(scale->eigenvalues()[k], s / 2);
      CHECK(std::abs(hs.norm(phi) - expected) <= 1e-10 * expected);
    }
  }
}

TEST_CASE("s_norm: monotone in s on modes with eigenvalue at least one") {
  const FunctionSpace q = gamma2_space(8);
  auto scale = std::make_shared<const HilbertScale>(q, BoundaryVariant::Neumann);
  for (Index k = 0; k < scale->dim(); ++k) {
    if (scale->eigenvalues()[k] < 1.0) continue;
    const auto phi = scale->eigenvectors().column(k);
    double prev = 0.0;
    for (double s : {-1.0, -0.5, -0.14, 0.0, 0.5, 1.0}) {
      const double v = FractionalNorm(scale, s).norm(phi);
      CHECK(v >= prev * (1.0 - 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("fracnorm: duality H_s M^-1 H_-s = M") {
  const FunctionSpace q = gamma2_space(12);
  auto scale = std::make_shared<const HilbertScale>(q, BoundaryVariant::Neumann);
  const DenseMatrix minv = inverse(scale->m());
  for (double s : {0.14, 0.5, 1.0}) {
    const DenseSymMatrix prod = product(FractionalNorm(scale, s).matrix(), minv, FractionalNorm(scale, -s).matrix());
    CHECK(rel_diff(prod, scale->m()) <= 1e-9);
  }
}

TEST_CASE("fracnorm: inverse matrix and inverse operator") {
  const FunctionSpace q = gamma2_space(8);
  const FractionalNorm h = build_fracnorm(q, -0.14, BoundaryVariant::Dirichlet);
  const Vector x = uniform_vector(h.dim(), 2);
  const Vector y = h.inverse_operator()(h.matrix().multiply(x));
  CHECK(max_diff(x, y) <= 1e-10 * norm_inf(x));
  const DenseSymMatrix inv = h.scale().inverse_matrix(-0.14);
  CHECK(max_diff(inv.multiply(h.matrix().multiply(x)), x) <= 1e-10 * norm_inf(x));
}

TEST_CASE("sum_norm_apply: round trip, scalar and spectral oracle") {
  const FunctionSpace q = gamma2_space(9);
  auto scale = std::make_shared<const HilbertScale>(q, BoundaryVariant::Neumann);
  const FractionalNorm a(scale, -0.14), b(scale, -1.0);
  const SumNormInverse sum(a, b);
  CHECK(sum.dim() == 10);
  const Vector x = uniform_vector(10, 6);
  Vector y(10), back(10);
  sum.apply(x, y);
  sum.sum().multiply(y, back);
  CHECK(max_diff(back, x) <= 1e-10 * norm_inf(x));

  DenseSymMatrix oracle(10);
  const DenseMatrix& u = scale->eigenvectors();
  const DenseMatrix mu = scale->m().to_dense() * u;
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j <= i; ++j) {
      double v = 0.0;
      for (Index k = 0; k < 10; ++k) {
        const double l = scale->eigenvalues()[k];
        v += mu(i, k) * (std::pow(l, -0.14) + 1.0 / l) * mu(j, k);
      }
      oracle(i, j) = v;
    }
  CHECK(rel_diff(sum.sum(), oracle) <= 1e-10);

  const FunctionSpace single(share(SimplicialMesh(1, 1, {{0, 0, 0}, {0.5, 0, 0}}, {0, 1})), Element::P0);
  FracnormOptions o;
  o.operator_override = CsrMatrix::diagonal(Vector{0.5 * 3.0});
  auto s1 = std::make_shared<const HilbertScale>(single, BoundaryVariant::Neumann, o);
  const SumNormInverse one(FractionalNorm(s1, -0.14), FractionalNorm(s1, -1.0));
  Vector r(1);
  one.apply(Vector{1.0}, r);
  const double lambda = 3.0, mass = 0.5;
  CHECK(r[0] == doctest::Approx(1.0 / (mass * (std::pow(lambda, -0.14) + 1.0 / lambda))).epsilon(1e-12));

  const FunctionSpace other = gamma2_space(4);
  CHECK_THROWS_AS(SumNormInverse(a, build_fracnorm(other, -1.0, BoundaryVariant::Neumann)), DimensionError);
}

TEST_CASE("fracnorm: P0 curve operator") {
  const SimplicialMesh host = cube_mesh(8);
  const EmbeddedCurve tree = matched_curve(host, CurveKind::Tree);
  const CsrMatrix a = p0_curve_stiffness(*tree.mesh, BoundaryVariant::Neumann);
  CHECK(a.is_symmetric());
  CHECK(norm_inf(spmv(a, Vector(a.rows(), 1.0))) <= 1e-12);
  const CsrMatrix ad = p0_curve_stiffness(*tree.mesh, BoundaryVariant::Dirichlet);
  const EigenDecomposition e = sym_eig(dense_of(ad), false);
  CHECK(e.values.front() > 0.0);

  const FunctionSpace q(tree.mesh, Element::P0);
  const FractionalNorm h = build_fracnorm(q, -0.5, BoundaryVariant::Neumann);
  CHECK(h.dim() == q.dim());
  const FractionalNorm h0 = h.with_exponent(0.0);
  CHECK(rel_diff(h0.matrix(), dense_of(assemble(q, FormKind::Mass).matrix)) <= 1e-10);
}

TEST_CASE("fracnorm: P0 interval operator approximates the Laplacian spectrum") {
  const int n = 64;
  const FunctionSpace q(share(interval_mesh(n)), Element::P0);
  const FractionalNorm h = build_fracnorm(q, 1.0, BoundaryVariant::Dirichlet);
  const double pi = 3.14159265358979323846;
  for (int j = 1; j <= 3; ++j)
    CHECK(h.scale().eigenvalues()[j - 1] == doctest::Approx(j * j * pi * pi).epsilon(0.01));
}
