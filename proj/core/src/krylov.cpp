#include "tracenorm/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/random.hpp"

namespace tracenorm {

std::string_view to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::CholeskySolve: return "cholesky";
    case BlockKind::MultigridVcycle: return "multigrid";
    case BlockKind::FractionalInverse: return "fractional-inverse";
    case BlockKind::SumNormInverse: return "sum-norm-inverse";
    case BlockKind::Identity: return "identity";
  }
  return "unknown";
}

void BlockPreconditioner::add_block(BlockKind kind, LinearOperator op) {
  if (!op.apply) throw Error("BlockPreconditioner: empty operator");
  kinds_.push_back(kind);
  blocks_.push_back(std::move(op));
}

Index BlockPreconditioner::size() const noexcept {
  Index n = 0;
  for (const auto& b : blocks_) n += b.size;
  return n;
}

void BlockPreconditioner::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(size()) || y.size() != x.size())
    throw DimensionError("BlockPreconditioner: size mismatch");
  std::size_t offset = 0;
  for (const auto& b : blocks_) {
    const auto n = static_cast<std::size_t>(b.size);
    b.apply(x.subspan(offset, n), y.subspan(offset, n));
    offset += n;
  }
}

LinearOperator BlockPreconditioner::as_operator() const {
  auto self = std::make_shared<const BlockPreconditioner>(*this);
  return {size(), [self](std::span<const double> x, std::span<double> y) { self->apply(x, y); }};
}

std::string KrylovLog::to_json() const {
  nlohmann::ordered_json j;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["seed"] = seed;
  j["residuals"] = residuals;
  return j.dump(2);
}

MinresFailure::MinresFailure(KrylovLog log)
    : ConvergenceError("minres: no convergence within " + std::to_string(log.iterations) + " iterations",
                       log.iterations, log.final_residual()),
      log_(std::move(log)) {}

MinresResult minres(const LinearOperator& a, const LinearOperator& b, std::span<const double> rhs,
                    const MinresOptions& options) {
  const Index n = a.size;
  if (b.size != n || rhs.size() != static_cast<std::size_t>(n)) throw DimensionError("minres: size mismatch");
  const auto sz = static_cast<std::size_t>(n);

  MinresResult result;
  KrylovLog& log = result.log;
  log.seed = options.seed;
  Vector& x = result.x;
  x = options.random_initial ? uniform_vector(n, options.seed) : Vector(sz, 0.0);

  Vector r1(rhs.begin(), rhs.end());
  {
    Vector ax(sz);
    a.apply(x, ax);
    for (std::size_t i = 0; i < sz; ++i) r1[i] -= ax[i];
  }
  Vector y(sz);
  b.apply(r1, y);
  double beta1 = dot(r1, y);
  if (beta1 < 0.0) throw Error("minres: preconditioner is not positive definite");
  beta1 = std::sqrt(beta1);
  log.residuals.push_back(beta1);
  const double threshold = options.relative ? options.tolerance * beta1 : options.tolerance;
  if (beta1 < threshold || beta1 == 0.0) {
    log.converged = true;
    return result;
  }

  Vector r2 = r1, v(sz), w(sz, 0.0), w1(sz, 0.0), w2(sz, 0.0);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1, cs = -1.0, sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int itn = 1; itn <= options.max_iterations; ++itn) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < sz; ++i) v[i] = s * y[i];
    a.apply(v, y);
    if (itn >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    std::swap(r1, r2);
    r2 = y;
    b.apply(r2, y);
    oldb = beta;
    const double bb = dot(r2, y);
    if (bb < 0.0) throw Error("minres: preconditioner is not positive definite");
    beta = std::sqrt(bb);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const double denom = 1.0 / gamma;
    std::swap(w1, w2);
    std::swap(w2, w);
    for (std::size_t i = 0; i < sz; ++i) {
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
      x[i] += phi * w[i];
    }
    log.iterations = itn;
    log.residuals.push_back(phibar);
    if (phibar < threshold || beta == 0.0) {
      log.converged = true;
      return result;
    }
  }
  if (options.throw_on_cap)
    throw MinresFailure(std::move(log));
  return result;
}

}  // namespace tracenorm
