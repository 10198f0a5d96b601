#pragma once

#include <vector>

#include "tracenorm/dense.hpp"
#include "tracenorm/report.hpp"
#include "tracenorm/sparse.hpp"

namespace tracenorm {

/// Sine-basis model of the unit cube with n modes per axis and the same n modes on the curve.
/// Multi-index (i, k, l), 1-based, maps to column (i-1) + n*((k-1) + n*(l-1)).
enum class SpectralCurve { Gamma1, Gamma2 };

/// Gamma1 Schur complement diagonal entry S_j = 4/pi^2 sum_{k,l odd <= n} 1/(j^2+k^2+l^2), exact sum.
double schur_gamma1(int n, int j);

enum class SumMethod { Exact, Quadrature, Automatic };

/// All S_1..S_n. Quadrature evaluates the Laplace-transform representation
/// S_j = 4/pi^2 int_0^inf exp(-j^2 t) g(t)^2 dt, g(t) = sum_{m odd <= n} exp(-m^2 t),
/// with the trapezoid rule in log t; Automatic switches to it above n = 1024.
Vector schur_gamma1_all(int n, SumMethod method = SumMethod::Automatic);

enum class TraceSign { Direct, Unsigned };

/// n x n^3 trace matrix for Gamma1. Direct uses sin(k pi/2) sin(l pi/2); Unsigned gives +2 everywhere.
CsrMatrix trace_gamma1(int n, TraceSign sign = TraceSign::Direct);
/// n x n^3 trace matrix for Gamma2 from the closed form of the quadruple sine integral.
CsrMatrix trace_gamma2(int n);
/// Single entry 4 sqrt(3) int_0^1 sin(j pi t) sin(i pi t) sin(k pi t) sin(l pi t) dt.
double trace_gamma2_entry(int j, int i, int k, int l);
/// Diagonal of the cube operator, pi^2 (i^2 + k^2 + l^2).
Vector spectral_stiffness(int n);

/// Dense T A^{-1} T^T for Gamma2 without forming T.
DenseSymMatrix schur_gamma2(int n);

/// Eigenvalue of the curve H_{s,0} for mode j: (j pi)^{2s}, or ((j pi)^2 + 1)^s with mass.
double curve_norm_eigenvalue(int j, double s, bool with_mass = false);

struct SpectralOptions {
  bool with_mass = false;
  SumMethod sum = SumMethod::Automatic;
  /// Gamma2 runs with 256 < n <= 512 need this; larger n are refused.
  bool allow_large = false;
};

struct SpectralCondition {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
};

SpectralCondition spectral_condition(SpectralCurve curve, int n, double s, const SpectralOptions& options = {});

/// Columns: curve, s, n, lambda_min, lambda_max, kappa.
StudyReport spectral_condition_sweep(SpectralCurve curve, const std::vector<double>& s_values,
                                     const std::vector<int>& n_values, const SpectralOptions& options = {});

}  // namespace tracenorm
