#include "tracenorm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tracenorm/eigen.hpp"
#include "tracenorm/error.hpp"

namespace tracenorm {

namespace {

constexpr double kPi = std::numbers::pi;

void check_modes(int n) {
  if (n < 1) throw Error("spectral model: need at least one mode, got " + std::to_string(n));
}

Vector schur_exact(int n) {
  Vector s(static_cast<std::size_t>(n), 0.0);
  std::vector<double> kl;
  for (int k = 1; k <= n; k += 2)
    for (int l = 1; l <= n; l += 2) kl.push_back(static_cast<double>(k) * k + static_cast<double>(l) * l);
  for (int j = 1; j <= n; ++j) {
    const double j2 = static_cast<double>(j) * j;
    double sum = 0.0;
    for (double v : kl) sum += 1.0 / (j2 + v);
    s[j - 1] = 4.0 / (kPi * kPi) * sum;
  }
  return s;
}

Vector schur_quadrature(int n) {
  constexpr double h = 0.1;
  const double x_lo = -45.0 - 2.0 * std::log(static_cast<double>(n));
  const double x_hi = 6.0;
  const int points = static_cast<int>(std::ceil((x_hi - x_lo) / h)) + 1;
  std::vector<double> t(static_cast<std::size_t>(points)), w(static_cast<std::size_t>(points));
  for (int p = 0; p < points; ++p) {
    const double x = x_lo + h * p;
    t[p] = std::exp(x);
    double g = 0.0;
    for (int m = 1; m <= n; m += 2) {
      const double e = static_cast<double>(m) * m * t[p];
      if (e > 745.0) break;
      g += std::exp(-e);
    }
    w[p] = h * t[p] * g * g;
  }
  Vector s(static_cast<std::size_t>(n), 0.0);
  for (int j = 1; j <= n; ++j) {
    const double j2 = static_cast<double>(j) * j;
    double sum = 0.0;
    for (int p = 0; p < points; ++p) {
      const double e = j2 * t[p];
      if (e > 745.0) break;
      sum += std::exp(-e) * w[p];
    }
    s[j - 1] = 4.0 / (kPi * kPi) * sum;
  }
  return s;
}

// Nonzero entries (j, value) of the Gamma2 trace column for multi-index (i, k, l).
int gamma2_column(int n, int i, int k, int l, int* js, double* vals) {
  const int cand[8] = {i - k + l, i + k - l, i - k - l, i + k + l, -i - k + l, -i + k - l, -i - k - l, -i + k + l};
  const int sign[8] = {1, 1, -1, -1, -1, -1, 1, 1};
  int count = 0;
  for (int c = 0; c < 8; ++c) {
    const int j = cand[c];
    if (j < 1 || j > n) continue;
    int p = 0;
    while (p < count && js[p] != j) ++p;
    if (p == count) {
      js[count] = j;
      vals[count++] = 0.0;
    }
    vals[p] += sign[c];
  }
  int out = 0;
  const double scale = 4.0 * std::sqrt(3.0) / 8.0;
  for (int p = 0; p < count; ++p)
    if (vals[p] != 0.0) {
      js[out] = js[p];
      vals[out++] = scale * vals[p];
    }
  return out;
}

}  // namespace

double schur_gamma1(int n, int j) {
  check_modes(n);
  if (j < 1 || j > n) throw Error("schur_gamma1: mode index out of range");
  const double j2 = static_cast<double>(j) * j;
  double sum = 0.0;
  for (int k = 1; k <= n; k += 2)
    for (int l = 1; l <= n; l += 2) sum += 1.0 / (j2 + static_cast<double>(k) * k + static_cast<double>(l) * l);
  return 4.0 / (kPi * kPi) * sum;
}

Vector schur_gamma1_all(int n, SumMethod method) {
  check_modes(n);
  if (method == SumMethod::Automatic) method = n <= 1024 ? SumMethod::Exact : SumMethod::Quadrature;
  return method == SumMethod::Exact ? schur_exact(n) : schur_quadrature(n);
}

CsrMatrix trace_gamma1(int n, TraceSign sign) {
  check_modes(n);
  std::vector<Triplet> t;
  for (int j = 1; j <= n; ++j)
    for (int l = 1; l <= n; l += 2)
      for (int k = 1; k <= n; k += 2) {
        double v = 2.0;
        if (sign == TraceSign::Direct) v *= ((k / 2) % 2 ? -1.0 : 1.0) * ((l / 2) % 2 ? -1.0 : 1.0);
        t.push_back({j - 1, (j - 1) + n * ((k - 1) + n * (l - 1)), v});
      }
  const long long cols = static_cast<long long>(n) * n * n;
  if (cols > std::numeric_limits<Index>::max()) throw Error("trace_gamma1: too many modes for explicit assembly");
  return CsrMatrix::from_triplets(n, static_cast<Index>(cols), std::move(t));
}

double trace_gamma2_entry(int j, int i, int k, int l) {
  const int n = std::max({j, i, k, l});
  int js[8];
  double vals[8];
  const int cnt = gamma2_column(n, i, k, l, js, vals);
  for (int p = 0; p < cnt; ++p)
    if (js[p] == j) return vals[p];
  return 0.0;
}

CsrMatrix trace_gamma2(int n) {
  check_modes(n);
  const long long cols = static_cast<long long>(n) * n * n;
  if (cols > std::numeric_limits<Index>::max()) throw Error("trace_gamma2: too many modes for explicit assembly");
  std::vector<Triplet> t;
  int js[8];
  double vals[8];
  for (int l = 1; l <= n; ++l)
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i) {
        const int cnt = gamma2_column(n, i, k, l, js, vals);
        const Index col = (i - 1) + n * ((k - 1) + n * (l - 1));
        for (int p = 0; p < cnt; ++p) t.push_back({js[p] - 1, col, vals[p]});
      }
  return CsrMatrix::from_triplets(n, static_cast<Index>(cols), std::move(t));
}

Vector spectral_stiffness(int n) {
  check_modes(n);
  Vector a(static_cast<std::size_t>(n) * n * n);
  std::size_t p = 0;
  for (int l = 1; l <= n; ++l)
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i) a[p++] = kPi * kPi * (static_cast<double>(i) * i + k * k + l * l);
  return a;
}

DenseSymMatrix schur_gamma2(int n) {
  check_modes(n);
  DenseSymMatrix s(n);
  int js[8];
  double vals[8];
  for (int l = 1; l <= n; ++l)
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i) {
        const int cnt = gamma2_column(n, i, k, l, js, vals);
        if (cnt == 0) continue;
        const double inv_a = 1.0 / (kPi * kPi * (static_cast<double>(i) * i + k * k + l * l));
        for (int p = 0; p < cnt; ++p)
          for (int q = 0; q <= p; ++q) {
            const double v = vals[p] * vals[q] * inv_a;
            if (js[p] == js[q])
              s(js[p] - 1, js[q] - 1) += (p == q ? v : 2.0 * v);
            else
              s(js[p] - 1, js[q] - 1) += v;
          }
      }
  return s;
}

double curve_norm_eigenvalue(int j, double s, bool with_mass) {
  const double lam = (j * kPi) * (j * kPi) + (with_mass ? 1.0 : 0.0);
  return std::pow(lam, s);
}

SpectralCondition spectral_condition(SpectralCurve curve, int n, double s, const SpectralOptions& options) {
  check_modes(n);
  Vector mu;
  if (curve == SpectralCurve::Gamma1) {
    mu = schur_gamma1_all(n, options.sum);
    for (int j = 1; j <= n; ++j) mu[j - 1] /= curve_norm_eigenvalue(j, s, options.with_mass);
  } else {
    if (n > 512) throw Error("spectral_condition: Gamma2 with n > 512 exceeds the dense memory budget");
    if (n > 256 && !options.allow_large)
      throw Error("spectral_condition: Gamma2 with n > 256 needs allow_large (dense " + std::to_string(n) + "^2 Schur)");
    DenseSymMatrix schur = schur_gamma2(n);
    Vector d(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) d[j - 1] = 1.0 / std::sqrt(curve_norm_eigenvalue(j, s, options.with_mass));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b <= a; ++b) schur(a, b) *= d[a] * d[b];
    mu = sym_eig(schur, false).values;
  }
  const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
  return {*lo, *hi, *hi / *lo};
}

StudyReport spectral_condition_sweep(SpectralCurve curve, const std::vector<double>& s_values,
                                     const std::vector<int>& n_values, const SpectralOptions& options) {
  StudyReport report("spectral-cond", {"curve", "s", "n", "lambda_min", "lambda_max", "kappa"});
  const std::string name = curve == SpectralCurve::Gamma1 ? "gamma1" : "gamma2";
  for (double s : s_values)
    for (int n : n_values) {
      const auto c = spectral_condition(curve, n, s, options);
      report.add_row({name, s, static_cast<std::int64_t>(n), c.lambda_min, c.lambda_max, c.kappa});
    }
  return report;
}

}  // namespace tracenorm
