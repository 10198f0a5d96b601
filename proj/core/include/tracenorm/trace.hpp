#pragma once

#include <cstdint>

#include "tracenorm/fem.hpp"

namespace tracenorm {

struct TraceMatrix {
  /// T: row i holds the V basis functions evaluated at the i-th nodal point of Q.
  CsrMatrix interpolation;
  /// Mass matrix of Q.
  CsrMatrix q_mass;
  /// q_mass * interpolation, the coupling block of the saddle systems.
  CsrMatrix coupled;
};

/// V must be P1 on a full-dimensional mesh; Q is P1 (curve vertices) or P0 (segment midpoints).
TraceMatrix interpolation_trace(const FunctionSpace& v, const FunctionSpace& q);

/// Restriction of a V function to Q by L2 projection on the curve.
Vector projection_trace(const FunctionSpace& v, const FunctionSpace& q, const CsrMatrix& q_mass,
                        std::span<const double> u);

/// Largest max-norm difference between interpolation and projection traces over random V functions.
double check_projection_equivalence(const FunctionSpace& v, const FunctionSpace& q, int trials,
                                    std::uint64_t seed = 1);

/// True iff the smallest eigenvalue of T T^T exceeds rtol times the largest.
bool rank_check(const CsrMatrix& t, double rtol = 1e-10);

}  // namespace tracenorm
