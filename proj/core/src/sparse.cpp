#include "tracenorm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <unordered_map>

namespace tracenorm {

CsrMatrix::CsrMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
                     std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows < 0 || cols < 0) throw DimensionError("CsrMatrix: negative dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(rows) + 1 || row_ptr_.front() != 0 ||
      static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size() || col_idx_.size() != values_.size())
    throw DimensionError("CsrMatrix: inconsistent compressed structure");
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) throw DimensionError("CsrMatrix: column index out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw DimensionError("CsrMatrix: column indices must increase strictly within a row");
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw DimensionError("CsrMatrix::from_triplets: entry out of range");
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const Index r = triplets[k].row;
    const Index c = triplets[k].col;
    double v = 0.0;
    while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) v += triplets[k++].value;
    col_idx.push_back(c);
    values.push_back(v);
    ++row_ptr[r + 1];
  }
  for (Index i = 0; i < rows; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::identity(Index n) {
  const Vector ones(static_cast<std::size_t>(n), 1.0);
  return diagonal(ones);
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> d) {
  const Index n = static_cast<Index>(d.size());
  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1), col_idx(static_cast<std::size_t>(n));
  for (Index i = 0; i <= n; ++i) row_ptr[i] = i;
  for (Index i = 0; i < n; ++i) col_idx[i] = i;
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), Vector(d.begin(), d.end()));
}

CsrMatrix CsrMatrix::zero(Index rows, Index cols) {
  return CsrMatrix(rows, cols, std::vector<Index>(static_cast<std::size_t>(rows) + 1, 0), {}, {});
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& a, double drop_tol) {
  std::vector<Triplet> t;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > drop_tol) t.push_back({i, j, a(i, j)});
  return from_triplets(a.rows(), a.cols(), std::move(t));
}

double CsrMatrix::at(Index i, Index j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("CsrMatrix::at: index out of range");
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols_) || y.size() != static_cast<std::size_t>(rows_))
    throw DimensionError("spmv: dimension mismatch");
  for (Index i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(rows_) || y.size() != static_cast<std::size_t>(cols_))
    throw DimensionError("spmv transpose: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < rows_; ++i) {
    const double xi = x[i];
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * xi;
  }
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Index> row_ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index c : col_idx_) ++row_ptr[c + 1];
  for (Index j = 0; j < cols_; ++j) row_ptr[j + 1] += row_ptr[j];
  std::vector<Index> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<Index> col_idx(nnz());
  std::vector<double> values(nnz());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index dst = next[col_idx_[k]]++;
      col_idx[dst] = i;
      values[dst] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::multiply(const CsrMatrix& b) const {
  if (cols_ != b.rows_) throw DimensionError("sparse product: dimension mismatch");
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  std::vector<double> acc(static_cast<std::size_t>(b.cols_), 0.0);
  std::vector<Index> marker(static_cast<std::size_t>(b.cols_), -1);
  std::vector<Index> pattern;
  for (Index i = 0; i < rows_; ++i) {
    pattern.clear();
    for (Index ka = row_ptr_[i]; ka < row_ptr_[i + 1]; ++ka) {
      const Index k = col_idx_[ka];
      const double aik = values_[ka];
      for (Index kb = b.row_ptr_[k]; kb < b.row_ptr_[k + 1]; ++kb) {
        const Index j = b.col_idx_[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          pattern.push_back(j);
        }
        acc[j] += aik * b.values_[kb];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index j : pattern) {
      col_idx.push_back(j);
      values.push_back(acc[j]);
    }
    row_ptr[i + 1] = static_cast<Index>(col_idx.size());
  }
  return CsrMatrix(rows_, b.cols_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::scaled(double alpha) const {
  CsrMatrix c = *this;
  for (double& v : c.values_) v *= alpha;
  return c;
}

CsrMatrix CsrMatrix::submatrix(std::span<const Index> rows, std::span<const Index> cols) const {
  std::vector<Index> col_map(static_cast<std::size_t>(cols_), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] < 0 || cols[j] >= cols_) throw DimensionError("submatrix: column out of range");
    col_map[cols[j]] = static_cast<Index>(j);
  }
  std::vector<Triplet> t;
  for (std::size_t ii = 0; ii < rows.size(); ++ii) {
    const Index i = rows[ii];
    if (i < 0 || i >= rows_) throw DimensionError("submatrix: row out of range");
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_map[col_idx_[k]] >= 0) t.push_back({static_cast<Index>(ii), col_map[col_idx_[k]], values_[k]});
  }
  return from_triplets(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()), std::move(t));
}

CsrMatrix CsrMatrix::pruned(double tol) const {
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (std::abs(values_[k]) > tol) {
        col_idx.push_back(col_idx_[k]);
        values.push_back(values_[k]);
      }
    }
    row_ptr[i + 1] = static_cast<Index>(col_idx.size());
  }
  return CsrMatrix(rows_, cols_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

Vector CsrMatrix::diagonal() const {
  Vector d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::symmetry_defect() const {
  if (rows_ != cols_) throw DimensionError("symmetry_defect: matrix not square");
  const CsrMatrix t = transpose();
  return add(*this, t, 1.0, -1.0).max_abs();
}

bool CsrMatrix::is_symmetric(double rtol) const {
  if (rows_ != cols_) return false;
  return symmetry_defect() <= rtol * max_abs();
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix a(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) a(i, col_idx_[k]) = values_[k];
  return a;
}

LinearOperator CsrMatrix::as_operator() const {
  if (rows_ != cols_) throw DimensionError("as_operator: matrix not square");
  auto self = std::make_shared<const CsrMatrix>(*this);
  return {rows_, [self](std::span<const double> x, std::span<double> y) { self->multiply(x, y); }};
}

void CsrMatrix::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  os << std::setprecision(17);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      os << i + 1 << ' ' << col_idx_[k] + 1 << ' ' << values_[k] << '\n';
}

Vector spmv(const CsrMatrix& a, std::span<const double> x) {
  Vector y(static_cast<std::size_t>(a.rows()));
  a.multiply(x, y);
  return y;
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("sparse add: dimension mismatch");
  std::vector<Index> row_ptr(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  const auto ap = a.row_ptr(), bp = b.row_ptr();
  const auto ac = a.col_idx(), bc = b.col_idx();
  const auto av = a.values(), bv = b.values();
  for (Index i = 0; i < a.rows(); ++i) {
    Index ka = ap[i], kb = bp[i];
    while (ka < ap[i + 1] || kb < bp[i + 1]) {
      if (kb >= bp[i + 1] || (ka < ap[i + 1] && ac[ka] < bc[kb])) {
        col_idx.push_back(ac[ka]);
        values.push_back(alpha * av[ka++]);
      } else if (ka >= ap[i + 1] || bc[kb] < ac[ka]) {
        col_idx.push_back(bc[kb]);
        values.push_back(beta * bv[kb++]);
      } else {
        col_idx.push_back(ac[ka]);
        values.push_back(alpha * av[ka++] + beta * bv[kb++]);
      }
    }
    row_ptr[i + 1] = static_cast<Index>(col_idx.size());
  }
  return CsrMatrix(a.rows(), a.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix assemble_blocks(const std::vector<std::vector<const CsrMatrix*>>& blocks,
                          std::span<const Index> row_sizes, std::span<const Index> col_sizes) {
  if (blocks.size() != row_sizes.size()) throw DimensionError("assemble_blocks: row block count mismatch");
  std::vector<Index> row_off(row_sizes.size() + 1, 0), col_off(col_sizes.size() + 1, 0);
  for (std::size_t i = 0; i < row_sizes.size(); ++i) row_off[i + 1] = row_off[i] + row_sizes[i];
  for (std::size_t j = 0; j < col_sizes.size(); ++j) col_off[j + 1] = col_off[j] + col_sizes[j];
  std::vector<Triplet> t;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    if (blocks[bi].size() != col_sizes.size()) throw DimensionError("assemble_blocks: column block count mismatch");
    for (std::size_t bj = 0; bj < col_sizes.size(); ++bj) {
      const CsrMatrix* blk = blocks[bi][bj];
      if (blk == nullptr) continue;
      if (blk->rows() != row_sizes[bi] || blk->cols() != col_sizes[bj])
        throw DimensionError("assemble_blocks: block size mismatch");
      for (Index i = 0; i < blk->rows(); ++i)
        for (Index k = blk->row_ptr()[i]; k < blk->row_ptr()[i + 1]; ++k)
          t.push_back({row_off[bi] + i, col_off[bj] + blk->col_idx()[k], blk->values()[k]});
    }
  }
  return CsrMatrix::from_triplets(row_off.back(), col_off.back(), std::move(t));
}

}  // namespace tracenorm
