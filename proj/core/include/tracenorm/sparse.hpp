#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "tracenorm/dense.hpp"
#include "tracenorm/vector.hpp"

namespace tracenorm {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing within each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
            std::vector<double> values);

  /// Duplicate (row, col) entries are summed.
  static CsrMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static CsrMatrix identity(Index n);
  static CsrMatrix diagonal(std::span<const double> d);
  static CsrMatrix zero(Index rows, Index cols);
  static CsrMatrix from_dense(const DenseMatrix& a, double drop_tol = 0.0);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Entry lookup by binary search; absent entries are zero.
  double at(Index i, Index j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  CsrMatrix transpose() const;
  CsrMatrix multiply(const CsrMatrix& b) const;
  CsrMatrix scaled(double alpha) const;
  CsrMatrix submatrix(std::span<const Index> rows, std::span<const Index> cols) const;
  /// Drops stored entries with |value| <= tol.
  CsrMatrix pruned(double tol) const;

  Vector diagonal() const;
  double max_abs() const;
  /// max |a_ij - a_ji| <= rtol * max |a_ij|
  bool is_symmetric(double rtol = 1e-14) const;
  double symmetry_defect() const;

  DenseMatrix to_dense() const;
  LinearOperator as_operator() const;

  void write_matrix_market(std::ostream& os) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

Vector spmv(const CsrMatrix& a, std::span<const double> x);

/// alpha * a + beta * b
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha = 1.0, double beta = 1.0);

/// Places blocks into one matrix. Null entries are zero blocks; row/col sizes are given explicitly.
CsrMatrix assemble_blocks(const std::vector<std::vector<const CsrMatrix*>>& blocks,
                          std::span<const Index> row_sizes, std::span<const Index> col_sizes);

}  // namespace tracenorm
