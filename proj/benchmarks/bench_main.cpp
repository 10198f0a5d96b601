#include <benchmark/benchmark.h>

#include <memory>

#include "tracenorm/cholesky.hpp"
#include "tracenorm/curve.hpp"
#include "tracenorm/eigen.hpp"
#include "tracenorm/fem.hpp"
#include "tracenorm/fracnorm.hpp"
#include "tracenorm/krylov.hpp"
#include "tracenorm/problems.hpp"
#include "tracenorm/random.hpp"
#include "tracenorm/spectral.hpp"

using namespace tracenorm;

namespace {

void BM_SymGevp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto mesh = std::make_shared<const SimplicialMesh>(interval_mesh(n));
  const FunctionSpace q(mesh, Element::P1);
  const DenseSymMatrix a = DenseSymMatrix::from_dense(assemble(q, FormKind::StiffnessPlusMass).matrix.to_dense());
  const DenseSymMatrix m = DenseSymMatrix::from_dense(assemble(q, FormKind::Mass).matrix.to_dense());
  for (auto _ : state) benchmark::DoNotOptimize(sym_gevp(a, m, true));
}
BENCHMARK(BM_SymGevp)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CholeskyStiffness(benchmark::State& state) {
  auto mesh = std::make_shared<const SimplicialMesh>(cube_mesh(static_cast<int>(state.range(0))));
  const FunctionSpace v(mesh, Element::P1);
  const CsrMatrix a = assemble(v, FormKind::StiffnessPlusMass).matrix;
  for (auto _ : state) {
    SparseCholesky c(a);
    benchmark::DoNotOptimize(c.factor_nnz());
  }
}
BENCHMARK(BM_CholeskyStiffness)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SchurGamma1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(schur_gamma1_all(n, SumMethod::Quadrature));
}
BENCHMARK(BM_SchurGamma1)->Arg(1 << 10)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

void BM_MinresBabuska(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto mesh = std::make_shared<const SimplicialMesh>(cube_mesh(n));
  const EmbeddedCurve curve = matched_curve(*mesh, CurveKind::Gamma1);
  const FunctionSpace v(mesh, Element::P1);
  const FunctionSpace q(curve.mesh, Element::P1);
  const TraceMatrix t = interpolation_trace(v, q);
  const FractionalNorm h = build_fracnorm(q, -0.14, BoundaryVariant::Neumann);
  const Vector f = assemble_load(v, random_smooth_field(1));
  const Vector g = curve_load(q, random_smooth_field(2));
  const SaddleSystem sys = build_babuska(v, q, t, h, f, g);
  int its = 0;
  for (auto _ : state) {
    const MinresResult r = solve(sys);
    its = r.log.iterations;
    benchmark::DoNotOptimize(r.x.data());
  }
  state.counters["iterations"] = its;
}
BENCHMARK(BM_MinresBabuska)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
