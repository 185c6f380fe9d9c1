#include "mlv/linalg.hpp"

#include <utility>

namespace mlv {

ScalarMatrix ScalarMatrix::identity(std::size_t n, FieldId field) {
  ScalarMatrix m(n, n, field);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(field);
  return m;
}

ScalarMatrix ScalarMatrix::submatrix(const std::vector<std::size_t>& rows,
                                     const std::vector<std::size_t>& cols) const {
  ScalarMatrix s(rows.size(), cols.size(), field_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
  return s;
}

ScalarMatrix ScalarMatrix::transpose() const {
  ScalarMatrix t(cols_, rows_, field_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<Scalar> ScalarMatrix::apply(const std::vector<Scalar>& v) const {
  MLV_REQUIRE(v.size() == cols_, ErrorCode::LengthMismatch, "matrix-vector size mismatch");
  std::vector<Scalar> out(rows_, Scalar(field_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
  return out;
}

ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
  MLV_REQUIRE(a.cols_ == b.rows_, ErrorCode::LengthMismatch, "matrix product size mismatch");
  ScalarMatrix c(a.rows_, b.cols_, a.field_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

bool operator==(const ScalarMatrix& a, const ScalarMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.data_ == b.data_;
}

bool ScalarMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

EchelonForm row_reduce(ScalarMatrix m) {
  EchelonForm out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    const Scalar inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Scalar f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  out.rref = std::move(m);
  return out;
}

std::size_t rank(const ScalarMatrix& m) { return row_reduce(m).rank(); }

Scalar determinant(ScalarMatrix m) {
  MLV_REQUIRE(m.rows() == m.cols(), ErrorCode::SizeError, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  Scalar det = Scalar::one(m.field());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m(piv, col).is_zero()) ++piv;
    if (piv == n) return Scalar::zero(m.field());
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    const Scalar inv = m(col, col).inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      const Scalar f = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j)
        if (!m(col, j).is_zero()) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

std::vector<std::vector<Scalar>> nullspace(const ScalarMatrix& m) {
  const EchelonForm ef = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ef.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(m.cols(), Scalar(m.field()));
    v[free] = Scalar::one(m.field());
    for (std::size_t r = 0; r < ef.pivot_cols.size(); ++r) v[ef.pivot_cols[r]] = -ef.rref(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Scalar> solve(const ScalarMatrix& a, const std::vector<Scalar>& b) {
  MLV_REQUIRE(a.rows() == a.cols() && b.size() == a.rows(), ErrorCode::SizeError, "solve needs a square system");
  const std::size_t n = a.rows();
  ScalarMatrix aug(n, n + 1, a.field());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const EchelonForm ef = row_reduce(std::move(aug));
  MLV_REQUIRE(ef.rank() == n && (n == 0 || ef.pivot_cols.back() == n - 1), ErrorCode::SingularPivot,
          "pivot block is singular");
  std::vector<Scalar> x(n, Scalar(a.field()));
  for (std::size_t i = 0; i < n; ++i) x[i] = ef.rref(i, n);
  return x;
}

PivotSelection select_pivots(const ScalarMatrix& m) {
  PivotSelection sel;
  // Column pivots come from the row echelon form; row pivots from the echelon
  // form of the transpose restricted to those columns.
  sel.cols = row_reduce(m).pivot_cols;
  if (sel.cols.empty()) return sel;
  std::vector<std::size_t> all_rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) all_rows[i] = i;
  const ScalarMatrix restricted = m.submatrix(all_rows, sel.cols).transpose();
  sel.rows = row_reduce(restricted).pivot_cols;
  return sel;
}

}  // namespace mlv
