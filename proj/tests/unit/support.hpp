#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tracenorm/dense.hpp"
#include "tracenorm/random.hpp"
#include "tracenorm/sparse.hpp"

namespace testing {

using namespace tracenorm;

inline double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const DenseSymMatrix& a, const DenseSymMatrix& b) {
  double m = 0.0;
  for (Index i = 0; i < a.order(); ++i)
    for (Index j = 0; j <= i; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double max_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline DenseMatrix random_dense(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DenseMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = uniform(rng, -1.0, 1.0);
  return a;
}

/// G^T G + shift I
inline DenseSymMatrix random_spd(Index n, std::uint64_t seed, double shift = 1.0) {
  const DenseMatrix g = random_dense(n, n, seed);
  DenseSymMatrix s(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) {
      double v = 0.0;
      for (Index k = 0; k < n; ++k) v += g(k, i) * g(k, j);
      s(i, j) = v + (i == j ? shift : 0.0);
    }
  return s;
}

inline DenseSymMatrix random_symmetric(Index n, std::uint64_t seed) {
  const DenseMatrix g = random_dense(n, n, seed);
  DenseSymMatrix s(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) s(i, j) = 0.5 * (g(i, j) + g(j, i));
  return s;
}

inline CsrMatrix to_csr(const DenseSymMatrix& a) { return CsrMatrix::from_dense(a.to_dense()); }

inline CsrMatrix laplacian_1d(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

/// Gaussian elimination with partial pivoting on a copy.
inline Vector dense_solve(DenseMatrix a, Vector b) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    Index p = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (Index j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    for (Index i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n);
  for (Index i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (Index j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

inline double determinant(DenseMatrix a) {
  const Index n = a.rows();
  double det = 1.0;
  for (Index k = 0; k < n; ++k) {
    Index p = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (Index j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (Index i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

inline std::vector<double> bisection_roots(const DenseSymMatrix& a, const DenseSymMatrix& m, double lo, double hi) {
  const DenseMatrix da = a.to_dense();
  const DenseMatrix dm = m.to_dense();
  auto f = [&](double lambda) {
    DenseMatrix c(da.rows(), da.cols());
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j) c(i, j) = da(i, j) - lambda * dm(i, j);
    return determinant(c);
  };
  std::vector<double> roots;
  const int samples = 200000;
  double x0 = lo, f0 = f(lo);
  for (int k = 1; k <= samples; ++k) {
    const double x1 = lo + (hi - lo) * k / samples;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if (f0 * f1 < 0.0) {
      double a0 = x0, a1 = x1, fa = f0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a0 + a1);
        const double fm = f(mid);
        if (fa * fm <= 0.0) {
          a1 = mid;
        } else {
          a0 = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a0 + a1));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

}  // namespace testing
