#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tracenorm/curve.hpp"
#include "tracenorm/trace.hpp"

using namespace tracenorm;
using namespace testing;

namespace {

MeshPtr share(SimplicialMesh m) { return std::make_shared<const SimplicialMesh>(std::move(m)); }

void check_partition_of_unity(const TraceMatrix& t) {
  const Vector ones(static_cast<std::size_t>(t.interpolation.cols()), 1.0);
  const Vector r = spmv(t.interpolation, ones);
  for (double x : r) CHECK(std::abs(x - 1.0) <= 1e-12);
}

}  // namespace

TEST_CASE("trace: matching Gamma1 P1 is nodal selection") {
  const MeshPtr mesh = share(cube_mesh(4));
  const EmbeddedCurve c = matched_curve(*mesh, CurveKind::Gamma1);
  const FunctionSpace v(mesh, Element::P1), q(c.mesh, Element::P1);
  const TraceMatrix t = interpolation_trace(v, q);
  REQUIRE(t.interpolation.rows() == q.dim());
  REQUIRE(t.interpolation.cols() == v.dim());
  for (Index i = 0; i < q.dim(); ++i) {
    CHECK(t.interpolation.at(i, c.host_vertex[i]) == doctest::Approx(1.0).epsilon(1e-14));
    double off = 0.0;
    for (Index k = t.interpolation.row_ptr()[i]; k < t.interpolation.row_ptr()[i + 1]; ++k)
      if (t.interpolation.col_idx()[k] != c.host_vertex[i]) off += std::abs(t.interpolation.values()[k]);
    CHECK(off <= 1e-14);
  }
  check_partition_of_unity(t);
  const CsrMatrix ref = t.q_mass.multiply(t.interpolation);
  CHECK(max_diff(t.coupled.to_dense(), ref.to_dense()) <= 1e-14);
}

TEST_CASE("trace: partition of unity for all curves and both elements") {
  const MeshPtr mesh = share(cube_mesh(8));
  for (CurveKind kind : {CurveKind::Gamma1, CurveKind::Gamma2, CurveKind::Tree}) {
    const EmbeddedCurve c = matched_curve(*mesh, kind);
    for (Element e : {Element::P1, Element::P0}) {
      const FunctionSpace v(mesh, Element::P1), q(c.mesh, e);
      check_partition_of_unity(interpolation_trace(v, q));
    }
  }
  const MeshPtr cube7 = share(cube_mesh(7));
  for (CurveKind kind : {CurveKind::SquareLoop, CurveKind::Spiral}) {
    const EmbeddedCurve c = independent_curve(kind, 12);
    for (Element e : {Element::P1, Element::P0}) {
      const FunctionSpace v(cube7, Element::P1), q(c.mesh, e);
      check_partition_of_unity(interpolation_trace(v, q));
    }
  }
}

TEST_CASE("trace: nonmatching circle rows have at most three nonzeros") {
  const MeshPtr mesh = share(square_mesh(16));
  const EmbeddedCurve c = independent_curve(CurveKind::Circle, 24);
  const FunctionSpace v(mesh, Element::P1), q(c.mesh, Element::P1);
  const TraceMatrix t = interpolation_trace(v, q);
  for (Index i = 0; i < t.interpolation.rows(); ++i) {
    CHECK(t.interpolation.row_ptr()[i + 1] - t.interpolation.row_ptr()[i] <= 3);
    double s = 0.0;
    for (Index k = t.interpolation.row_ptr()[i]; k < t.interpolation.row_ptr()[i + 1]; ++k)
      s += t.interpolation.values()[k];
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  CHECK(rank_check(t.interpolation));
}

TEST_CASE("trace: projection equals interpolation on matching pairs") {
  const MeshPtr mesh = share(cube_mesh(4));
  for (CurveKind kind : {CurveKind::Gamma1, CurveKind::Gamma2}) {
    const EmbeddedCurve c = matched_curve(*mesh, kind);
    const FunctionSpace v(mesh, Element::P1), q(c.mesh, Element::P1);
    CHECK(check_projection_equivalence(v, q, 20) <= 1e-12);
  }
}

TEST_CASE("trace: constant functions have constant traces") {
  const MeshPtr mesh = share(cube_mesh(4));
  const EmbeddedCurve c = matched_curve(*mesh, CurveKind::Gamma2);
  const FunctionSpace v(mesh, Element::P1), q(c.mesh, Element::P1);
  const TraceMatrix t = interpolation_trace(v, q);
  const Vector u(static_cast<std::size_t>(v.dim()), 2.5);
  const Vector p = projection_trace(v, q, t.q_mass, u);
  const Vector pi = spmv(t.interpolation, u);
  for (Index i = 0; i < q.dim(); ++i) {
    CHECK(p[i] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(pi[i] == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("trace: nonmatching pair shows a discrepancy") {
  const MeshPtr fine = share(cube_mesh(4));
  const SimplicialMesh coarse = cube_mesh(2);
  const EmbeddedCurve c = matched_curve(coarse, CurveKind::Gamma1);
  const FunctionSpace v(fine, Element::P1), q(c.mesh, Element::P1);
  CHECK(check_projection_equivalence(v, q, 5) > 1e-6);
}

TEST_CASE("rank_check: matching full rank, duplicated dof deficient") {
  const MeshPtr mesh = share(cube_mesh(8));
  const EmbeddedCurve c = matched_curve(*mesh, CurveKind::Gamma1);
  const FunctionSpace v(mesh, Element::P1), q(c.mesh, Element::P1);
  const TraceMatrix t = interpolation_trace(v, q);
  CHECK(rank_check(t.interpolation));

  std::vector<Triplet> rows;
  for (Index i = 0; i < 3; ++i) rows.push_back({i, i, 1.0});
  rows.push_back({3, 2, 1.0});
  CHECK_FALSE(rank_check(CsrMatrix::from_triplets(4, 5, rows)));
}

TEST_CASE("trace: nonmatching 3d with h below H is full rank") {
  const MeshPtr mesh = share(cube_mesh(15));
  const EmbeddedCurve c = independent_curve(CurveKind::SquareLoop, 8);
  REQUIRE(check_infsup_ratio(*mesh, c) < 1.0);
  const FunctionSpace v(mesh, Element::P1), q(c.mesh, Element::P0);
  CHECK(rank_check(interpolation_trace(v, q).interpolation));
}

TEST_CASE("trace: curve outside the domain raises") {
  const MeshPtr mesh = share(square_mesh(4));
  const SimplicialMesh curve(1, 2, {{0.5, 0.5, 0}, {1.5, 0.5, 0}}, {0, 1});
  const FunctionSpace v(mesh, Element::P1), q(std::make_shared<const SimplicialMesh>(curve), Element::P1);
  CHECK_THROWS_AS(interpolation_trace(v, q), Error);
}
