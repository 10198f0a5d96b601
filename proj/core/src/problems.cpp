#include "tracenorm/problems.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "tracenorm/cholesky.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/random.hpp"

namespace tracenorm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

LinearOperator domain_block(const CsrMatrix& a, const DomainBlockOptions& options, BlockKind& kind, double& setup) {
  if (options.multigrid) {
    if (options.multigrid->size() != a.rows()) throw DimensionError("domain block: multigrid size mismatch");
    kind = BlockKind::MultigridVcycle;
    auto mg = options.multigrid;
    return {mg->size(), [mg](std::span<const double> x, std::span<double> y) { mg->apply(x, y); }};
  }
  kind = BlockKind::CholeskySolve;
  const auto t0 = Clock::now();
  auto chol = std::make_shared<const SparseCholesky>(a);
  setup += seconds_since(t0);
  return inverse_operator(std::move(chol));
}

void check_rhs(std::span<const double> x, Index n, const char* what) {
  if (x.size() != static_cast<std::size_t>(n))
    throw DimensionError(std::string("saddle system: ") + what + " has the wrong size");
}

Point segment_point(const SimplicialMesh& m, Index c, double t) {
  const auto vs = m.cell(c);
  const Point& a = m.vertex(vs[0]);
  const Point& b = m.vertex(vs[1]);
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

}  // namespace

std::span<const double> SaddleSystem::block(std::span<const double> x, std::size_t b) const {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < b; ++k) offset += static_cast<std::size_t>(block_sizes.at(k));
  return x.subspan(offset, static_cast<std::size_t>(block_sizes.at(b)));
}

SaddleSystem build_babuska(const FunctionSpace& v, const FunctionSpace& q, const TraceMatrix& trace,
                           const FractionalNorm& norm, std::span<const double> f, std::span<const double> g,
                           const DomainBlockOptions& options) {
  const Index nv = v.dim(), nq = q.dim();
  if (trace.coupled.rows() != nq || trace.coupled.cols() != nv) throw DimensionError("build_babuska: trace size");
  if (norm.dim() != nq) throw DimensionError("build_babuska: multiplier norm must cover every Q dof");
  check_rhs(f, nv, "f");
  check_rhs(g, nq, "g");
  SaddleSystem sys;
  sys.dim_v = nv;
  sys.dim_q = nq;
  sys.block_sizes = {nv, nq};
  const CsrMatrix avm = assemble(v, FormKind::StiffnessPlusMass).matrix;
  const CsrMatrix bt = trace.coupled.transpose();
  sys.matrix = assemble_blocks({{&avm, &bt}, {&trace.coupled, nullptr}}, sys.block_sizes, sys.block_sizes);
  sys.rhs.assign(f.begin(), f.end());
  sys.rhs.insert(sys.rhs.end(), g.begin(), g.end());
  BlockKind kind;
  LinearOperator dom = domain_block(avm, options, kind, sys.setup_seconds);
  sys.preconditioner.add_block(kind, std::move(dom));
  sys.preconditioner.add_block(BlockKind::FractionalInverse, norm.inverse_operator());
  return sys;
}

SaddleSystem build_coupled(const FunctionSpace& v, const FunctionSpace& w, const FunctionSpace& q,
                           const TraceMatrix& trace, const FractionalNorm& norm_a, const FractionalNorm& norm_b,
                           std::span<const double> f, std::span<const double> g, std::span<const double> h,
                           const DomainBlockOptions& options) {
  if (w.mesh_ptr() != q.mesh_ptr() || w.element() != q.element())
    throw Error("build_coupled: the curve unknown and the multiplier must share one space");
  const Index nv = v.dim(), nw = w.dim(), nq = q.dim();
  if (trace.coupled.rows() != nq || trace.coupled.cols() != nv) throw DimensionError("build_coupled: trace size");
  check_rhs(f, nv, "f");
  check_rhs(g, nw, "g");
  check_rhs(h, nq, "h");
  SaddleSystem sys;
  sys.dim_v = nv;
  sys.dim_w = nw;
  sys.dim_q = nq;
  sys.block_sizes = {nv, nw, nq};
  const CsrMatrix avm = assemble(v, FormKind::StiffnessPlusMass).matrix;
  const CsrMatrix awm = assemble(w, FormKind::StiffnessPlusMass).matrix;
  const CsrMatrix mg = trace.q_mass.scaled(-1.0);
  const CsrMatrix bt = trace.coupled.transpose();
  sys.matrix = assemble_blocks({{&avm, nullptr, &bt}, {nullptr, &awm, &mg}, {&trace.coupled, &mg, nullptr}},
                               sys.block_sizes, sys.block_sizes);
  sys.rhs.assign(f.begin(), f.end());
  sys.rhs.insert(sys.rhs.end(), g.begin(), g.end());
  sys.rhs.insert(sys.rhs.end(), h.begin(), h.end());
  BlockKind kind;
  LinearOperator dom = domain_block(avm, options, kind, sys.setup_seconds);
  sys.preconditioner.add_block(kind, std::move(dom));
  const auto t0 = Clock::now();
  sys.preconditioner.add_block(BlockKind::CholeskySolve, inverse_operator(std::make_shared<const SparseCholesky>(awm)));
  const auto sum = std::make_shared<const SumNormInverse>(norm_a, norm_b);
  sys.setup_seconds += seconds_since(t0);
  if (sum->dim() != nq) throw DimensionError("build_coupled: multiplier norm must cover every Q dof");
  sys.preconditioner.add_block(BlockKind::SumNormInverse,
                               {nq, [sum](std::span<const double> x, std::span<double> y) { sum->apply(x, y); }});
  return sys;
}

SaddleSystem build_nonmatching(const FunctionSpace& v, const FunctionSpace& q, const EmbeddedCurve& curve,
                               const TraceMatrix& trace, const FractionalNorm& norm, std::span<const double> f,
                               std::span<const double> g, const NonmatchingOptions& options) {
  if (q.mesh_ptr() != curve.mesh) throw Error("build_nonmatching: Q must live on the given curve");
  const double ratio = check_infsup_ratio(v.mesh(), curve);
  if (ratio >= 1.0 && !options.allow_ratio_violation)
    throw Error("build_nonmatching: domain cells along the curve are not finer than the curve segments (h/H = " +
                std::to_string(ratio) + "); the discretization must satisfy h <= cH with c < 1");
  return build_babuska(v, q, trace, norm, f, g, options.domain);
}

MinresResult solve(const SaddleSystem& system, const MinresOptions& options) {
  return minres(system.matrix.as_operator(), system.preconditioner.as_operator(), system.rhs, options);
}

ScalarField random_smooth_field(std::uint64_t seed, int max_frequency) {
  const int k = max_frequency + 1;
  std::mt19937_64 rng(seed);
  std::vector<double> c(static_cast<std::size_t>(k * k * k));
  for (double& x : c) x = uniform(rng, -1.0, 1.0);
  return [c, k](const Point& x) {
    const double pi = std::numbers::pi;
    double s = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int d = 0; d < k; ++d)
          s += c[static_cast<std::size_t>(a + k * (b + k * d))] * std::cos(a * pi * x[0]) * std::cos(b * pi * x[1]) *
               std::cos(d * pi * x[2]);
    return s;
  };
}

Vector curve_load(const FunctionSpace& q, const ScalarField& f) {
  if (q.mesh().tdim() != 1) throw Error("curve_load: Q must live on a curve");
  return assemble_load(q, f);
}

Vector curve_load_on_domain(const FunctionSpace& v, const SimplicialMesh& curve, const ScalarField& p) {
  if (v.element() != Element::P1) throw Error("curve_load_on_domain: V must be P1");
  const auto rule = simplex_quadrature(1);
  Vector out(static_cast<std::size_t>(v.dim()), 0.0);
  for (Index c = 0; c < curve.num_cells(); ++c) {
    const double len = curve.cell_measure(c);
    for (const auto& qp : rule) {
      const Point x = segment_point(curve, c, qp.barycentric[1]);
      const auto loc = locate_point(v.mesh(), x);
      const auto vs = v.mesh().cell(loc.cell);
      const double val = p(x) * qp.weight * len;
      for (std::size_t a = 0; a < vs.size(); ++a) out[vs[a]] += val * loc.barycentric[a];
    }
  }
  return out;
}

ManufacturedCase circle_manufactured_case() {
  const double pi = std::numbers::pi;
  ManufacturedCase mc;
  mc.u = [pi](const Point& x) { return std::cos(pi * x[0]) * std::cos(pi * x[1]); };
  mc.grad_u = [pi](const Point& x) {
    return Point{-pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), -pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), 0.0};
  };
  mc.f = [pi](const Point& x) { return (2.0 * pi * pi + 1.0) * std::cos(pi * x[0]) * std::cos(pi * x[1]); };
  mc.p = [](const Point& x) { return 1.0 + std::sin(2.0 * std::atan2(x[1] - 0.5, x[0] - 0.5)); };
  return mc;
}

int nonmatching_2d_cells(int level) {
  if (level < 0 || level > 8) throw Error("refinement level " + std::to_string(level) + " out of range");
  return 1 << (level + 5);
}

std::vector<std::string> iteration_columns() {
  return {"experiment", "curve", "element", "s",     "level", "n",    "dimV",
          "dimW",       "dimQ",  "iterations", "errH1", "errQs", "seed"};
}

std::vector<ReportCell> manufactured_level(int level, Element q_element, const MinresOptions& minres) {
  const ManufacturedCase mc = circle_manufactured_case();
  constexpr double s = -0.5;
  const int n = nonmatching_2d_cells(level);
  auto mesh = std::make_shared<const SimplicialMesh>(square_mesh(n));
  const EmbeddedCurve curve = independent_curve(CurveKind::Circle, n / 2);
  const FunctionSpace v(mesh, Element::P1);
  const FunctionSpace q(curve.mesh, q_element);
  const TraceMatrix trace = interpolation_trace(v, q);
  const FractionalNorm norm = build_fracnorm(q, s, BoundaryVariant::Neumann);

  Vector f = assemble_load(v, mc.f);
  const Vector fp = spmv(trace.interpolation.transpose(), curve_load(q, mc.p));
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += fp[i];
  const Vector g = curve_load(q, mc.u);
  const SaddleSystem sys = build_nonmatching(v, q, curve, trace, norm, f, g);
  const MinresResult res = solve(sys, minres);

  const auto uh = sys.block(res.x, 0);
  const auto ph = sys.block(res.x, 1);
  const double err_u = error_norms(v, uh, mc.u, mc.grad_u).h1;
  Vector dp = interpolate(q, mc.p);
  for (std::size_t i = 0; i < dp.size(); ++i) dp[i] -= ph[i];
  const double err_p = norm.norm(dp);
  return {std::string("nonmatching-2d"), std::string("circle"), std::string(q_element == Element::P1 ? "p1" : "p0"),
          s, static_cast<std::int64_t>(level), static_cast<std::int64_t>(n), static_cast<std::int64_t>(v.dim()),
          std::monostate{}, static_cast<std::int64_t>(q.dim()), static_cast<std::int64_t>(res.log.iterations), err_u,
          err_p, static_cast<std::int64_t>(minres.seed)};
}

StudyReport manufactured_convergence(const ManufacturedOptions& options) {
  StudyReport report("nonmatching-2d", iteration_columns());
  for (int level : options.levels) report.add_row(manufactured_level(level, options.q_element, options.minres));
  return report;
}

}  // namespace tracenorm
