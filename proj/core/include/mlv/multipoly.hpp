#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlv/monomial.hpp"
#include "mlv/scalar.hpp"

namespace mlv {

/// Block structure (n_1, ..., n_d) of the variables. Blocks and coordinates
/// are 0-based; variable (j, s) has index offset(j) + s.
class VarBlocks {
public:
  VarBlocks() = default;
  explicit VarBlocks(std::vector<std::size_t> sizes);
  /// One block holding all n variables.
  static VarBlocks single(std::size_t n) { return n == 0 ? VarBlocks() : VarBlocks({n}); }

  std::size_t num_blocks() const noexcept { return sizes_.size(); }
  std::size_t size(std::size_t block) const { return sizes_.at(block); }
  std::size_t offset(std::size_t block) const { return offsets_.at(block); }
  std::size_t total() const noexcept { return total_; }
  std::size_t var(std::size_t block, std::size_t coord) const { return offsets_.at(block) + coord; }
  /// Block containing variable index v.
  std::size_t block_of(std::size_t v) const;
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

  friend bool operator==(const VarBlocks& a, const VarBlocks& b) { return a.sizes_ == b.sizes_; }
  friend bool operator!=(const VarBlocks& a, const VarBlocks& b) { return a.sizes_ != b.sizes_; }

private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

struct Term {
  Monomial mono;
  Scalar coef;
};

/// Sparse polynomial; terms are kept sorted by ascending lex order of their
/// exponent vectors with no zero coefficients, so equality is structural.
class MultiPoly {
public:
  MultiPoly() = default;
  MultiPoly(FieldId field, VarBlocks blocks);

  static MultiPoly constant(FieldId field, const VarBlocks& blocks, const Scalar& c);
  static MultiPoly variable(FieldId field, const VarBlocks& blocks, std::size_t var);
  static MultiPoly monomial(FieldId field, const VarBlocks& blocks, const Monomial& m, const Scalar& c);
  /// Sorts and combines like terms, dropping zeros.
  static MultiPoly from_terms(FieldId field, const VarBlocks& blocks, std::vector<Term> terms);

  FieldId field() const noexcept { return field_; }
  const VarBlocks& blocks() const noexcept { return blocks_; }
  std::size_t nvars() const noexcept { return blocks_.total(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
  }

  Scalar coefficient(const Monomial& m) const;
  Scalar constant_term() const;
  unsigned total_degree() const;
  bool is_homogeneous() const;
  /// Per-block degree bound: entry j is the max over terms of the degree in block j.
  std::vector<unsigned> block_degrees() const;
  /// Bitmask of variables occurring in some term.
  std::uint64_t support() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const Scalar& c, const MultiPoly& p);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  MultiPoly pow(unsigned e) const;
  /// -> this * c * m
  MultiPoly mul_term(const Monomial& m, const Scalar& c) const;

  Scalar evaluate(std::span<const Scalar> point) const;
  MultiPoly derivative(std::size_t var) const;
  /// Same polynomial viewed in another ring of equal variable count.
  MultiPoly with_blocks(VarBlocks blocks) const;
  /// Image under Q -> F_p.
  MultiPoly reduce_to(FieldId target) const;

  std::string to_string() const;

private:
  void check_compatible(const MultiPoly& o) const;

  FieldId field_;
  VarBlocks blocks_;
  std::vector<Term> terms_;
};

enum class RingOp { Add, Sub, Mul, ScalarMul };

/// ScalarMul multiplies p by the constant value of q (q must be constant).
MultiPoly poly_ring_ops(const MultiPoly& p, const MultiPoly& q, RingOp op);

Scalar evaluate(const MultiPoly& p, std::span<const Scalar> point);

/// Replaces every variable i by images[i] (all images share one target ring).
MultiPoly compose(const MultiPoly& p, const std::vector<MultiPoly>& images);

/// Block i is replaced by v_i + x_i when i is not fixed and by v_i when fixed.
MultiPoly shift_substitute(const MultiPoly& p, std::span<const Scalar> v, const std::vector<std::size_t>& fixed_blocks);

/// Leading term under `order`; ZeroPolynomial for p = 0.
std::pair<Monomial, Scalar> leading_term(const MultiPoly& p, MonomialOrder order);

/// q | p exactly, returns p / q; throws BadParams when the division is not exact.
MultiPoly exact_divide(const MultiPoly& p, const MultiPoly& q);

}  // namespace mlv
