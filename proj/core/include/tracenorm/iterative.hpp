#pragma once

#include <optional>

#include "tracenorm/vector.hpp"

namespace tracenorm {

struct CgOptions {
  double rtol = 1e-15;
  /// 0 selects 10 * n.
  int max_iterations = 0;
};

struct CgResult {
  Vector x;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Preconditioned conjugate gradients; stops when ||b - A x|| <= rtol * ||b||.
/// Throws ConvergenceError carrying the last residual when the cap is hit.
CgResult cg_solve(const LinearOperator& a, std::span<const double> b, const CgOptions& options = {},
                  const std::optional<LinearOperator>& preconditioner = std::nullopt);

}  // namespace tracenorm
