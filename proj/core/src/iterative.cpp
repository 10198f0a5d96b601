#include "tracenorm/iterative.hpp"

#include <algorithm>
#include <string>

namespace tracenorm {

CgResult cg_solve(const LinearOperator& a, std::span<const double> b, const CgOptions& options,
                  const std::optional<LinearOperator>& preconditioner) {
  const auto n = static_cast<std::size_t>(a.size);
  if (b.size() != n) throw DimensionError("cg_solve: rhs size mismatch");
  if (preconditioner && preconditioner->size != a.size) throw DimensionError("cg_solve: preconditioner size mismatch");
  const int cap = options.max_iterations > 0 ? options.max_iterations : 10 * std::max<int>(1, a.size);

  CgResult result;
  result.x.assign(n, 0.0);
  Vector r(b.begin(), b.end());
  const double bnorm = norm2(b);
  const double target = options.rtol * bnorm;
  result.residual_norm = bnorm;
  if (bnorm == 0.0) return result;

  Vector z(n), p(n), q(n);
  auto precondition = [&](const Vector& in, Vector& out) {
    if (preconditioner)
      preconditioner->apply(in, out);
    else
      std::copy(in.begin(), in.end(), out.begin());
  };
  precondition(r, z);
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= cap; ++it) {
    a.apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw Error("cg_solve: operator is not positive definite (p^T A p = " + std::to_string(pq) + ")");
    const double alpha = rz / pq;
    axpy(alpha, p, result.x);
    axpy(-alpha, q, r);
    result.iterations = it;
    result.residual_norm = norm2(r);
    if (result.residual_norm <= target) return result;
    precondition(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw ConvergenceError("cg_solve: iteration cap " + std::to_string(cap) + " reached, residual " +
                             std::to_string(result.residual_norm),
                         result.iterations, result.residual_norm);
}

}  // namespace tracenorm
