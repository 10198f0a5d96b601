#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracenorm/error.hpp"
#include "tracenorm/vector.hpp"

namespace tracenorm {

enum class BlockKind { CholeskySolve, MultigridVcycle, FractionalInverse, SumNormInverse, Identity };

std::string_view to_string(BlockKind kind);

/// Block-diagonal preconditioner; every block must be a fixed SPD operator.
class BlockPreconditioner {
 public:
  void add_block(BlockKind kind, LinearOperator op);

  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  BlockKind kind(std::size_t b) const { return kinds_.at(b); }
  const LinearOperator& block(std::size_t b) const { return blocks_.at(b); }
  Index size() const noexcept;

  void apply(std::span<const double> x, std::span<double> y) const;
  LinearOperator as_operator() const;

 private:
  std::vector<BlockKind> kinds_;
  std::vector<LinearOperator> blocks_;
};

struct MinresOptions {
  double tolerance = 1e-12;
  /// Stop on sqrt(r^T B r) < tolerance * sqrt(r0^T B r0) instead of the absolute test.
  bool relative = false;
  int max_iterations = 1000;
  std::uint64_t seed = 20170119;
  /// Start from a seeded uniform [-1, 1] vector; zero otherwise.
  bool random_initial = true;
  /// Return the current iterate instead of throwing when the cap is hit.
  bool throw_on_cap = true;
};

struct KrylovLog {
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  /// Preconditioned residual norm sqrt(r^T B r), starting with the initial residual.
  std::vector<double> residuals;

  double final_residual() const { return residuals.empty() ? 0.0 : residuals.back(); }
  std::string to_json() const;
};

/// Thrown when MINRES hits its iteration cap; carries the full log.
class MinresFailure : public ConvergenceError {
 public:
  explicit MinresFailure(KrylovLog log);
  const KrylovLog& log() const noexcept { return log_; }

 private:
  KrylovLog log_;
};

struct MinresResult {
  Vector x;
  KrylovLog log;
};

/// Preconditioned MINRES for symmetric A and SPD B. Throws MinresFailure when the iteration cap is
/// exceeded and throw_on_cap is set.
MinresResult minres(const LinearOperator& a, const LinearOperator& b, std::span<const double> rhs,
                    const MinresOptions& options = {});

}  // namespace tracenorm
