#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "tracenorm/fem.hpp"
#include "tracenorm/problems.hpp"

using namespace tracenorm;
using namespace testing;

namespace {

struct Matched {
  MeshPtr mesh;
  EmbeddedCurve curve;
  FunctionSpace v;
  FunctionSpace q;
  TraceMatrix trace;

  Matched(int n, CurveKind kind)
      : mesh(std::make_shared<const SimplicialMesh>(cube_mesh(n))),
        curve(matched_curve(*mesh, kind)),
        v(mesh, Element::P1),
        q(curve.mesh, Element::P1),
        trace(interpolation_trace(v, q)) {}
};

double block_transpose_defect(const CsrMatrix& k, Index r0, Index nr, Index c0, Index nc) {
  double d = 0.0;
  for (Index i = 0; i < nr; ++i)
    for (Index j = 0; j < nc; ++j) d = std::max(d, std::abs(k.at(r0 + i, c0 + j) - k.at(c0 + j, r0 + i)));
  return d;
}

Vector residual(const SaddleSystem& s, std::span<const double> x) {
  Vector r = s.rhs;
  const Vector kx = spmv(s.matrix, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= kx[i];
  return r;
}

}  // namespace

TEST_CASE("babuska: symmetric saddle matrix with transposed coupling") {
  const Matched m(8, CurveKind::Gamma1);
  const FractionalNorm h = build_fracnorm(m.q, -0.14, BoundaryVariant::Neumann);
  const Vector f(m.v.dim(), 1.0), g(m.q.dim(), 1.0);
  const SaddleSystem s = build_babuska(m.v, m.q, m.trace, h, f, g);
  CHECK(s.matrix.rows() == m.v.dim() + m.q.dim());
  CHECK(s.matrix.symmetry_defect() <= 1e-13);
  CHECK(block_transpose_defect(s.matrix, m.v.dim(), m.q.dim(), 0, m.v.dim()) == 0.0);
  for (Index i = 0; i < m.q.dim(); ++i)
    for (Index j = 0; j < m.q.dim(); ++j) CHECK(s.matrix.at(m.v.dim() + i, m.v.dim() + j) == 0.0);
  CHECK(s.preconditioner.num_blocks() == 2);
  CHECK(to_string(s.preconditioner.kind(1)) == "fractional-inverse");

  CHECK_THROWS_AS(build_babuska(m.v, m.q, m.trace, h, Vector(3), g), DimensionError);
  const FractionalNorm hd = build_fracnorm(m.q, -0.14, BoundaryVariant::Dirichlet);
  CHECK_THROWS_AS(build_babuska(m.v, m.q, m.trace, hd, f, g), DimensionError);
}

TEST_CASE("babuska: consistent data gives the prescribed trace and a zero multiplier") {
  for (CurveKind kind : {CurveKind::Gamma1, CurveKind::Gamma2, CurveKind::Tree}) {
    const Matched m(8, kind);
    const FractionalNorm h = build_fracnorm(m.q, -0.14, BoundaryVariant::Neumann);
    const Vector u = uniform_vector(m.v.dim(), 3);
    const CsrMatrix avm = assemble(m.v, FormKind::StiffnessPlusMass).matrix;
    const Vector f = spmv(avm, u);
    const Vector g = spmv(m.trace.coupled, u);
    const SaddleSystem s = build_babuska(m.v, m.q, m.trace, h, f, g);
    const MinresResult r = solve(s);
    CHECK(r.log.converged);
    CHECK(max_diff(s.block(r.x, 0), u) <= 1e-8);
    CHECK(norm_inf(Vector(s.block(r.x, 1).begin(), s.block(r.x, 1).end())) <= 1e-8);
  }
}

TEST_CASE("babuska: the solution minimizes energy over the constraint set") {
  const Matched m(4, CurveKind::Gamma1);
  const FractionalNorm h = build_fracnorm(m.q, -0.14, BoundaryVariant::Neumann);
  const Vector f = assemble_load(m.v, random_smooth_field(1));
  const Vector g = curve_load(m.q, random_smooth_field(2));
  const SaddleSystem s = build_babuska(m.v, m.q, m.trace, h, f, g);
  const MinresResult r = solve(s);
  const Vector u(s.block(r.x, 0).begin(), s.block(r.x, 0).end());
  const CsrMatrix avm = assemble(m.v, FormKind::StiffnessPlusMass).matrix;
  const DenseMatrix b = m.trace.coupled.to_dense();
  const Index nq = b.rows(), nv = b.cols();

  DenseMatrix bbt(nq, nq);
  for (Index i = 0; i < nq; ++i)
    for (Index j = 0; j < nq; ++j) {
      double v = 0.0;
      for (Index c = 0; c < nv; ++c) v += b(i, c) * b(j, c);
      bbt(i, j) = v;
    }
  auto energy = [&](const Vector& w) { return 0.5 * dot(w, spmv(avm, w)) - dot(f, w); };
  const double e0 = energy(u);
  for (std::uint64_t t = 0; t < 50; ++t) {
    Vector d = uniform_vector(nv, 100 + t);
    Vector bd(nq, 0.0);
    for (Index i = 0; i < nq; ++i)
      for (Index c = 0; c < nv; ++c) bd[i] += b(i, c) * d[c];
    const Vector y = dense_solve(bbt, bd);
    for (Index c = 0; c < nv; ++c)
      for (Index i = 0; i < nq; ++i) d[c] -= b(i, c) * y[i];
    Vector w = u;
    axpy(1.0, d, w);
    CHECK(energy(w) - e0 >= -1e-10);
  }
}

TEST_CASE("coupled: constraint row holds at convergence") {
  const Matched m(8, CurveKind::Gamma1);
  const FunctionSpace& w = m.q;
  const FractionalNorm ha = build_fracnorm(m.q, -0.14, BoundaryVariant::Neumann);
  const FractionalNorm hb = ha.with_exponent(-1.0);
  const Vector f = assemble_load(m.v, random_smooth_field(5));
  const Vector g = curve_load(w, random_smooth_field(6));
  const Vector hr(m.q.dim(), 0.0);
  const SaddleSystem s = build_coupled(m.v, w, m.q, m.trace, ha, hb, f, g, hr);
  CHECK(s.block_sizes == std::vector<Index>{m.v.dim(), w.dim(), m.q.dim()});
  CHECK(s.matrix.symmetry_defect() <= 1e-13);
  CHECK(to_string(s.preconditioner.kind(2)) == "sum-norm-inverse");
  const MinresResult r = solve(s);
  CHECK(r.log.converged);
  CHECK(r.log.iterations < 100);
  const Vector res = residual(s, r.x);
  double worst = 0.0;
  for (Index i = m.v.dim() + w.dim(); i < static_cast<Index>(res.size()); ++i) worst = std::max(worst, std::abs(res[i]));
  CHECK(worst <= 1e-10);

  const FunctionSpace other(m.curve.mesh, Element::P0);
  CHECK_THROWS_AS(build_coupled(m.v, other, m.q, m.trace, ha, hb, f, Vector(other.dim()), hr), Error);
}

TEST_CASE("nonmatching: exact linear solution is recovered") {
  auto mesh = std::make_shared<const SimplicialMesh>(square_mesh(16));
  const EmbeddedCurve c = independent_curve(CurveKind::Circle, 8);
  const FunctionSpace v(mesh, Element::P1);
  const FunctionSpace q(c.mesh, Element::P1);
  const TraceMatrix t = interpolation_trace(v, q);
  const FractionalNorm h = build_fracnorm(q, -0.5, BoundaryVariant::Neumann);
  const ScalarField lin = [](const Point& x) { return 1.0 + x[0] - 2.0 * x[1]; };
  const VectorField grad = [](const Point&) { return Point{1.0, -2.0, 0.0}; };
  const Vector ui = interpolate(v, lin);
  const Vector f = spmv(assemble(v, FormKind::StiffnessPlusMass).matrix, ui);
  const Vector g = curve_load(q, lin);
  const SaddleSystem s = build_nonmatching(v, q, c, t, h, f, g);
  const MinresResult r = solve(s);
  CHECK(error_norms(v, s.block(r.x, 0), lin, grad).h1 <= 1e-10);
}

TEST_CASE("nonmatching: curve finer than the domain mesh is rejected unless overridden") {
  auto mesh = std::make_shared<const SimplicialMesh>(square_mesh(8));
  const EmbeddedCurve c = independent_curve(CurveKind::Circle, 64);
  CHECK(check_infsup_ratio(*mesh, c) >= 1.0);
  const FunctionSpace v(mesh, Element::P1);
  const FunctionSpace q(c.mesh, Element::P1);
  const TraceMatrix t = interpolation_trace(v, q);
  const FractionalNorm h = build_fracnorm(q, -0.5, BoundaryVariant::Neumann);
  const Vector f(v.dim(), 0.0), g(q.dim(), 1.0);
  CHECK_THROWS_AS(build_nonmatching(v, q, c, t, h, f, g), Error);
  NonmatchingOptions o;
  o.allow_ratio_violation = true;
  CHECK(build_nonmatching(v, q, c, t, h, f, g, o).dim_q == 64);

  const EmbeddedCurve other = independent_curve(CurveKind::Circle, 4);
  CHECK_THROWS_AS(build_nonmatching(v, q, other, t, h, f, g, o), Error);
}

TEST_CASE("manufactured case: Neumann data and strong form") {
  const ManufacturedCase mc = circle_manufactured_case();
  for (double t : {0.0, 0.1, 0.37, 0.8, 1.0}) {
    CHECK(std::abs(mc.grad_u({0.0, t, 0.0})[0]) <= 1e-12);
    CHECK(std::abs(mc.grad_u({1.0, t, 0.0})[0]) <= 1e-12);
    CHECK(std::abs(mc.grad_u({t, 0.0, 0.0})[1]) <= 1e-12);
    CHECK(std::abs(mc.grad_u({t, 1.0, 0.0})[1]) <= 1e-12);
  }
  const double e = 1e-4;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Vector r = uniform_vector(2, 40 + k, 0.0, 1.0);
    const Point x{r[0], r[1], 0.0};
    const double u = mc.u(x);
    const double lap = (mc.u({x[0] + e, x[1], 0}) + mc.u({x[0] - e, x[1], 0}) + mc.u({x[0], x[1] + e, 0}) +
                        mc.u({x[0], x[1] - e, 0}) - 4.0 * u) /
                       (e * e);
    CHECK(std::abs(mc.f(x) - (-lap + u)) <= 1e-4);
    const Point gu = mc.grad_u(x);
    CHECK(gu[0] == doctest::Approx((mc.u({x[0] + e, x[1], 0}) - mc.u({x[0] - e, x[1], 0})) / (2 * e)).epsilon(1e-6));
  }
  const double theta = std::numbers::pi / 4.0;
  CHECK(mc.p({0.5 + 0.25 * std::cos(theta), 0.5 + 0.25 * std::sin(theta), 0.0}) == doctest::Approx(2.0));
}

TEST_CASE("manufactured_level: row layout and sanity") {
  MinresOptions o;
  const std::vector<ReportCell> row = manufactured_level(0, Element::P1, o);
  REQUIRE(row.size() == iteration_columns().size());
  StudyReport r("nonmatching-2d", iteration_columns());
  r.add_row(row);
  CHECK(r.number(0, "n") == 32);
  CHECK(r.number(0, "dimV") == 33 * 33);
  CHECK(r.number(0, "dimQ") == 16);
  CHECK(r.number(0, "iterations") > 0);
  CHECK(r.number(0, "iterations") < 200);
  CHECK(r.number(0, "errH1") < 0.5);
  CHECK(r.number(0, "errQs") < 1.0);
  CHECK(nonmatching_2d_cells(3) == 256);
  CHECK_THROWS_AS(nonmatching_2d_cells(9), Error);
}

TEST_CASE("random_smooth_field and curve loads") {
  const ScalarField a = random_smooth_field(7), b = random_smooth_field(7), c = random_smooth_field(8);
  const Point x{0.3, 0.6, 0.2};
  CHECK(a(x) == b(x));
  CHECK(a(x) != c(x));
  CHECK(std::abs(a(x)) <= 27.0);

  const Matched m(8, CurveKind::Gamma1);
  const ScalarField one = [](const Point&) { return 1.0; };
  double total = 0.0;
  for (double v : curve_load(m.q, one)) total += v;
  CHECK(total == doctest::Approx(m.curve.length()).epsilon(1e-13));
  total = 0.0;
  for (double v : curve_load_on_domain(m.v, *m.curve.mesh, one)) total += v;
  CHECK(total == doctest::Approx(m.curve.length()).epsilon(1e-13));

  const ScalarField lin = [](const Point& y) { return 2.0 - y[0]; };
  const Vector dom = curve_load_on_domain(m.v, *m.curve.mesh, lin);
  const Vector ref = spmv(m.trace.coupled.transpose(), interpolate(m.q, lin));
  CHECK(max_diff(dom, ref) <= 1e-13);
  CHECK_THROWS_AS(curve_load(m.v, one), Error);
}

TEST_CASE("babuska: level-2 Gamma1 iteration count is moderate") {
  const Matched m(32, CurveKind::Gamma1);
  const FractionalNorm h = build_fracnorm(m.q, -0.14, BoundaryVariant::Neumann);
  const Vector f = assemble_load(m.v, random_smooth_field(20170120));
  const Vector g = curve_load(m.q, random_smooth_field(20170121));
  const MinresResult r = solve(build_babuska(m.v, m.q, m.trace, h, f, g));
  CHECK(r.log.converged);
  CHECK(r.log.final_residual() < 1e-12);
  CHECK(r.log.iterations >= 15);
  CHECK(r.log.iterations <= 90);
}

TEST_CASE("manufactured_level: H1 error halves under refinement") {
  MinresOptions o;
  StudyReport r("nonmatching-2d", iteration_columns());
  for (Element e : {Element::P1, Element::P0}) {
    r.add_row(manufactured_level(0, e, o));
    r.add_row(manufactured_level(1, e, o));
  }
  for (std::size_t i = 0; i < r.size(); i += 2) {
    const double ratio = r.number(i, "errH1") / r.number(i + 1, "errH1");
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
    CHECK(r.number(i + 1, "errQs") < r.number(i, "errQs"));
  }
}
