#pragma once

#include <cstddef>
#include <vector>

#include "mlv/linalg.hpp"
#include "mlv/multipoly.hpp"

namespace mlv {

/// Row-major matrix of polynomials over one ring.
class PolyMatrix {
public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, FieldId field, const VarBlocks& blocks);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  FieldId field() const noexcept { return field_; }
  const VarBlocks& blocks() const noexcept { return blocks_; }

  MultiPoly& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const MultiPoly& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  PolyMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  ScalarMatrix evaluate(std::span<const Scalar> point) const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  FieldId field_;
  VarBlocks blocks_;
  std::vector<MultiPoly> data_;
};

/// Entry (i, j) is the formal partial derivative of ps[i] by variable j.
PolyMatrix jacobian(const std::vector<MultiPoly>& ps);

/// Cofactor expansion below size 4, fraction-free Bareiss from size 4 on.
MultiPoly poly_determinant(const PolyMatrix& m);

/// All k x k minors. Row subsets are enumerated in increasing lex order; for
/// each row subset the column subsets follow in increasing lex order.
/// Empty when k exceeds either dimension; SizeError for k = 0.
std::vector<MultiPoly> minors(const PolyMatrix& m, std::size_t k);

/// Increasing k-subsets of {0, ..., n-1} in lex order.
std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k);

}  // namespace mlv
