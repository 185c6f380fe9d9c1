#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlv/linalg.hpp"
#include "mlv/multipoly.hpp"

namespace mlv {

/// One coordinate vector per block.
using BlockPoint = std::vector<std::vector<Scalar>>;

/// Dense multi-affine map K^{n_1} x ... x K^{n_d} -> K^m. Entry (i_1, ..., i_d, out)
/// has i_j in 0..n_j, where 0 is the affine slot of block j and s >= 1 is
/// coordinate s - 1; out is in 0..m-1. A homogeneous tensor has zero entries
/// whenever some i_j = 0, i.e. it is multilinear.
class Tensor {
public:
  Tensor() = default;
  Tensor(FieldId field, VarBlocks shape, std::size_t m, bool homogeneous = true);
  /// Takes raw storage laid out as data(); validates size and homogeneity.
  static Tensor from_data(FieldId field, VarBlocks shape, std::size_t m, bool homogeneous, std::vector<Scalar> data);

  FieldId field() const noexcept { return field_; }
  const VarBlocks& blocks() const noexcept { return shape_; }
  std::size_t num_blocks() const noexcept { return shape_.num_blocks(); }
  std::size_t size(std::size_t j) const { return shape_.size(j); }
  std::size_t m() const noexcept { return m_; }
  bool homogeneous() const noexcept { return homogeneous_; }
  /// A form: homogeneous with one output.
  bool is_form() const noexcept { return homogeneous_ && m_ == 1; }

  const Scalar& at(std::span<const std::size_t> idx, std::size_t out) const { return data_[offset(idx, out)]; }
  /// NotHomogeneous when writing a nonzero affine entry into a homogeneous tensor.
  void set(std::span<const std::size_t> idx, std::size_t out, const Scalar& value);
  /// Adds to an entry (same homogeneity rule as set).
  void add(std::span<const std::size_t> idx, std::size_t out, const Scalar& value);
  std::size_t offset(std::span<const std::size_t> idx, std::size_t out) const;

  /// Raw storage, row-major over (i_1, ..., i_d, out) with out fastest.
  const std::vector<Scalar>& data() const noexcept { return data_; }
  std::size_t stride(std::size_t j) const { return strides_.at(j); }
  /// Visits every multi-index (i_1, ..., i_d) in storage order.
  template <class F>
  void for_each_index(F&& f) const;

  bool is_zero() const;
  /// Recomputes the flag from the entries.
  bool entries_are_multilinear() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.field_ == b.field_ && a.shape_ == b.shape_ && a.m_ == b.m_ && a.homogeneous_ == b.homogeneous_ &&
           a.data_ == b.data_;
  }
  friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }
  friend Tensor operator+(const Tensor& a, const Tensor& b);
  friend Tensor operator*(const Scalar& c, const Tensor& t);

private:
  FieldId field_;
  VarBlocks shape_;
  std::size_t m_ = 0;
  bool homogeneous_ = true;
  std::vector<std::size_t> strides_;  // one per block
  std::vector<Scalar> data_;
};

template <class F>
void Tensor::for_each_index(F&& f) const {
  const std::size_t d = num_blocks();
  std::vector<std::size_t> idx(d, 0);
  const std::size_t cells = m_ == 0 ? 0 : data_.size() / m_;
  for (std::size_t c = 0; c < cells; ++c) {
    f(std::span<const std::size_t>(idx));
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] <= shape_.size(j)) break;
      idx[j] = 0;
    }
  }
}

/// ShapeMismatch unless the point matches the tensor's blocks.
std::vector<Scalar> eval_tensor(const Tensor& t, const BlockPoint& v);

/// Substitutes w for block j; the result has d - 1 blocks.
Tensor contract(const Tensor& t, std::size_t j, std::span<const Scalar> w);

/// Forms: f(x) + g(y) with m = 1. Maps: (F(x), G(y)) with m1 + m2 outputs.
/// ArityMismatch when the block counts differ or only one side is a form.
Tensor direct_sum(const Tensor& a, const Tensor& b);

/// maps[j] is n_j(t) x n_j(target); the result is x -> t(maps[0] x_0, ..., maps[d-1] x_{d-1}).
Tensor restrict_tensor(const Tensor& t, const std::vector<ScalarMatrix>& maps);

/// Symmetric multilinear form f_P with f_P(v, ..., v) = P(v), over d blocks of
/// size n = number of variables of P. The coefficient of x_{1,a_1} ... x_{d,a_d}
/// is coef_P(x^alpha) * alpha! / d!, alpha the exponent vector of the multiset {a}.
Tensor polarize(const MultiPoly& p);
Tensor polarize(const MultiPoly& p, unsigned degree);

/// Rank of the n_j x prod_{i != j} n_i flattening. NotForm unless t is a form.
std::size_t flattening_rank(const Tensor& t, std::size_t j);

/// Slice system F_{f,j}: a homogeneous map on the other blocks with n_j outputs;
/// output s is the coefficient of x_{j,s} in f. NotForm unless f is a form.
Tensor slice_system(const Tensor& f, std::size_t j);

/// Component polynomials in the ring VarBlocks(shape).
std::vector<MultiPoly> tensor_to_polys(const Tensor& t);
/// Inverse of tensor_to_polys; BadParams if some term has block degree > 1.
/// The homogeneous flag is set when every term is multilinear.
Tensor tensor_from_polys(const std::vector<MultiPoly>& polys);

Tensor gen_diag(FieldId field, std::size_t d, std::size_t r, std::size_t n);
/// tr(XYZ) on three blocks of size r^2; X_{ab} has index a * r + b.
Tensor gen_matmul_form(FieldId field, std::size_t r);
/// (X, Y) -> XY with m = r^2; output (a, c) has index a * r + c.
Tensor gen_matmul_map(FieldId field, std::size_t r);
/// Multiplication of the quaternion algebra (a, b) in the basis 1, i, j, k with
/// i^2 = a, j^2 = b, ij = -ji = k. BadParams if a or b is zero.
Tensor gen_quaternion(FieldId field, const Scalar& a, const Scalar& b);
/// Each entry is nonzero with probability `density`. Entries over Q are
/// nonzero integers in [-5, 5]; over F_p uniform nonzero residues.
Tensor gen_random(FieldId field, const VarBlocks& shape, std::size_t m, std::uint64_t seed, double density = 1.0);

/// {"schema":"1","shape":[...],"m":m,"field":...,"homogeneous":bool,
///  "entries":[{"idx":[i_1,...,i_d,out],"coef":...}]} listing nonzero entries.
nlohmann::json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& j);

BlockPoint split_point(const VarBlocks& blocks, std::span<const Scalar> flat);
std::vector<Scalar> flatten_point(const BlockPoint& v);

}  // namespace mlv
