#pragma once

#include <cstddef>
#include <vector>

#include "mlv/scalar.hpp"

namespace mlv {

/// Dense row-major matrix over a single field.
class ScalarMatrix {
public:
  ScalarMatrix() = default;
  ScalarMatrix(std::size_t rows, std::size_t cols, FieldId field)
      : rows_(rows), cols_(cols), field_(field), data_(rows * cols, Scalar(field)) {}

  static ScalarMatrix identity(std::size_t n, FieldId field);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  FieldId field() const noexcept { return field_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ScalarMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  ScalarMatrix transpose() const;
  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;
  friend ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b);
  friend bool operator==(const ScalarMatrix& a, const ScalarMatrix& b);

  bool is_zero() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  FieldId field_;
  std::vector<Scalar> data_;
};

/// Result of Gauss-Jordan elimination: the reduced row echelon form and the
/// pivot columns, in increasing order.
struct EchelonForm {
  ScalarMatrix rref;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const noexcept { return pivot_cols.size(); }
};

EchelonForm row_reduce(ScalarMatrix m);
std::size_t rank(const ScalarMatrix& m);
Scalar determinant(ScalarMatrix m);
/// Basis of {v : M v = 0}, one vector per non-pivot column.
std::vector<std::vector<Scalar>> nullspace(const ScalarMatrix& m);
/// Solves A x = b for square invertible A; SingularPivot otherwise.
std::vector<Scalar> solve(const ScalarMatrix& a, const std::vector<Scalar>& b);

/// A maximal nonsingular submatrix: rows and columns (increasing) whose
/// square submatrix has full rank equal to rank(M).
struct PivotSelection {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};
PivotSelection select_pivots(const ScalarMatrix& m);

}  // namespace mlv
