#include "tracenorm/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace tracenorm {

// Householder reduction (tred2 ordering). On entry `a` holds the full symmetric matrix; on exit it
// holds the orthogonal transformation when `accumulate` is set.
void householder_tridiagonalize(DenseMatrix& a, Vector& diag, Vector& offdiag, bool accumulate) {
  const Index n = a.rows();
  if (a.cols() != n) throw DimensionError("householder_tridiagonalize: matrix not square");
  diag.assign(static_cast<std::size_t>(n), 0.0);
  offdiag.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 0) return;
  Vector& d = diag;
  Vector& e = offdiag;
  DenseMatrix& v = a;

  for (Index j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (Index i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (Index k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (Index j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (Index k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (Index j = 0; j < i; ++j) e[j] = 0.0;

      for (Index j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        const auto vj = v.column(j);
        for (Index k = j + 1; k <= i - 1; ++k) {
          g += vj[k] * d[k];
          e[k] += vj[k] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (Index j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (Index j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (Index j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        auto vj = v.column(j);
        for (Index k = j; k <= i - 1; ++k) vj[k] -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (Index i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0 && accumulate) {
      for (Index k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (Index j = 0; j <= i; ++j) {
        double g = 0.0;
        for (Index k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (Index k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (Index k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (Index j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

void tridiagonal_ql(Vector& diag, Vector& offdiag, DenseMatrix* z) {
  const Index n = static_cast<Index>(diag.size());
  if (offdiag.size() != diag.size()) throw DimensionError("tridiagonal_ql: size mismatch");
  if (z != nullptr && (z->rows() != n || z->cols() != n)) throw DimensionError("tridiagonal_ql: bad vector block");
  if (n == 0) return;
  Vector& d = diag;
  Vector& e = offdiag;
  for (Index i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const int max_sweeps = 60;
  for (Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    Index m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_sweeps) throw ConvergenceError("tridiagonal_ql: no convergence", iter, std::abs(e[l]));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (Index i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (z != nullptr) {
            auto zi = z->column(i);
            auto zi1 = z->column(i + 1);
            for (Index k = 0; k < n; ++k) {
              h = zi1[k];
              zi1[k] = s * zi[k] + c * h;
              zi[k] = c * zi[k] - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  for (Index i = 0; i < n - 1; ++i) {
    Index k = i;
    double p = d[i];
    for (Index j = i + 1; j < n; ++j) {
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      if (z != nullptr) {
        auto zi = z->column(i);
        auto zk = z->column(k);
        std::swap_ranges(zi.begin(), zi.end(), zk.begin());
      }
    }
  }
}

namespace {

EigenDecomposition eig_of_dense(DenseMatrix work, bool want_vectors) {
  EigenDecomposition out;
  Vector e;
  householder_tridiagonalize(work, out.values, e, want_vectors);
  tridiagonal_ql(out.values, e, want_vectors ? &work : nullptr);
  if (want_vectors) out.vectors = std::move(work);
  return out;
}

}  // namespace

EigenDecomposition sym_eig(const DenseSymMatrix& a, bool want_vectors) {
  return eig_of_dense(a.to_dense(), want_vectors);
}

EigenDecomposition sym_gevp(const DenseSymMatrix& a, const DenseSymMatrix& m, bool want_vectors) {
  const Index n = a.order();
  if (m.order() != n) throw DimensionError("sym_gevp: order mismatch");
  const DenseCholesky chol(m);

  // C = L^{-1} A L^{-T}, formed column-wise through two sweeps of forward substitution.
  DenseMatrix x = a.to_dense();
  for (Index j = 0; j < n; ++j) chol.forward_in_place(x.column(j));
  DenseMatrix c = x.transpose();
  for (Index j = 0; j < n; ++j) chol.forward_in_place(c.column(j));
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) {
      const double avg = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = avg;
      c(j, i) = avg;
    }

  EigenDecomposition out = eig_of_dense(std::move(c), want_vectors);
  if (want_vectors)
    for (Index j = 0; j < n; ++j) chol.backward_in_place(out.vectors.column(j));
  return out;
}

double extremal_gevp(const LinearOperator& s, const DenseSymMatrix& h, Extreme which, const ExtremalOptions& options) {
  const Index n = h.order();
  if (s.size != n) throw DimensionError("extremal_gevp: operator/matrix size mismatch");
  if (n == 0) throw DimensionError("extremal_gevp: empty problem");
  const DenseCholesky chol(h);

  // Symmetric form C = L^{-1} S L^{-T}.
  Vector tmp(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  auto apply_c = [&](std::span<const double> q, std::span<double> w) {
    std::copy(q.begin(), q.end(), tmp.begin());
    chol.backward_in_place(tmp);
    s.apply(tmp, out);
    std::copy(out.begin(), out.end(), w.begin());
    chol.forward_in_place(w);
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Vector> basis;
  Vector q(static_cast<std::size_t>(n));
  for (double& v : q) v = uni(rng);
  {
    const double nq = norm2(q);
    for (double& v : q) v /= nq;
  }
  Vector alpha, beta;
  Vector w(static_cast<std::size_t>(n));
  double ritz = 0.0;
  const int cap = std::max(1, options.max_iterations);

  for (int k = 0; k < cap; ++k) {
    basis.push_back(q);
    apply_c(q, w);
    const double a = dot(q, w);
    alpha.push_back(a);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) axpy(-dot(b, w), b, w);
    const double b = norm2(w);

    const Index kk = static_cast<Index>(alpha.size());
    Vector d = alpha;
    Vector e(static_cast<std::size_t>(kk), 0.0);
    for (Index i = 1; i < kk; ++i) e[i] = beta[i - 1];
    DenseMatrix z = DenseMatrix::identity(kk);
    tridiagonal_ql(d, e, &z);
    const Index idx = which == Extreme::Min ? 0 : kk - 1;
    ritz = d[idx];
    const double bound = b * std::abs(z(kk - 1, idx));
    double scale = 0.0;
    for (double v : d) scale = std::max(scale, std::abs(v));

    if (kk == n || b <= 1e-14 * std::max(scale, 1e-300)) return ritz;
    if (bound <= options.rtol * std::abs(ritz)) return ritz;

    beta.push_back(b);
    for (Index i = 0; i < n; ++i) q[i] = w[i] / b;
  }
  throw ConvergenceError("extremal_gevp: no convergence, last Ritz value " + std::to_string(ritz), cap, ritz);
}

}  // namespace tracenorm
