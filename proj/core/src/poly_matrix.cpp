#include "mlv/poly_matrix.hpp"

#include <utility>

namespace mlv {

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, FieldId field, const VarBlocks& blocks)
    : rows_(rows), cols_(cols), field_(field), blocks_(blocks), data_(rows * cols, MultiPoly(field, blocks)) {}

PolyMatrix PolyMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
  PolyMatrix s(rows.size(), cols.size(), field_, blocks_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
  return s;
}

ScalarMatrix PolyMatrix::evaluate(std::span<const Scalar> point) const {
  ScalarMatrix out(rows_, cols_, field_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).evaluate(point);
  return out;
}

PolyMatrix jacobian(const std::vector<MultiPoly>& ps) {
  if (ps.empty()) return {};
  const MultiPoly& p0 = ps.front();
  PolyMatrix j(ps.size(), p0.nvars(), p0.field(), p0.blocks());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].field() != p0.field()) fail(ErrorCode::FieldMismatch, "polynomials over different fields");
    if (ps[i].blocks() != p0.blocks()) fail(ErrorCode::BlockMismatch, "polynomials in different rings");
    for (std::size_t v = 0; v < p0.nvars(); ++v) j(i, v) = ps[i].derivative(v);
  }
  return j;
}

namespace {

MultiPoly cofactor_det(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return MultiPoly::constant(m.field(), m.blocks(), Scalar::one(m.field()));
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  MultiPoly acc(m.field(), m.blocks());
  std::vector<std::size_t> rows;
  for (std::size_t i = 1; i < n; ++i) rows.push_back(i);
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c).is_zero()) continue;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (j != c) cols.push_back(j);
    MultiPoly t = m(0, c) * cofactor_det(m.submatrix(rows, cols));
    if (c % 2 == 0) acc += t;
    else acc -= t;
  }
  return acc;
}

MultiPoly bareiss_det(PolyMatrix a) {
  const std::size_t n = a.rows();
  MultiPoly prev = MultiPoly::constant(a.field(), a.blocks(), Scalar::one(a.field()));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k).is_zero()) ++piv;
      if (piv == n) return MultiPoly(a.field(), a.blocks());
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        MultiPoly num = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        a(i, j) = exact_divide(num, prev);
      }
      a(i, k) = MultiPoly(a.field(), a.blocks());
    }
    prev = a(k, k);
  }
  MultiPoly d = a(n - 1, n - 1);
  return negate ? -d : d;
}

}  // namespace

MultiPoly poly_determinant(const PolyMatrix& m) {
  MLV_REQUIRE(m.rows() == m.cols(), ErrorCode::SizeError, "determinant of non-square matrix");
  return m.rows() < 4 ? cofactor_det(m) : bareiss_det(m);
}

std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<MultiPoly> minors(const PolyMatrix& m, std::size_t k) {
  MLV_REQUIRE(k >= 1, ErrorCode::SizeError, "minor size must be positive");
  std::vector<MultiPoly> out;
  if (k > m.rows() || k > m.cols()) return out;
  const auto rs = k_subsets(m.rows(), k);
  const auto cs = k_subsets(m.cols(), k);
  out.reserve(rs.size() * cs.size());
  for (const auto& r : rs)
    for (const auto& c : cs) out.push_back(poly_determinant(m.submatrix(r, c)));
  return out;
}

}  // namespace mlv
