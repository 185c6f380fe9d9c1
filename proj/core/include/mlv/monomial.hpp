#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "mlv/error.hpp"

namespace mlv {

/// Hard cap on ring size; larger inputs are rejected with SizeError.
inline constexpr std::size_t kMaxVars = 64;
inline constexpr unsigned kMaxExponent = 255;

/// Dense exponent vector of fixed capacity. Unused slots stay zero so that
/// byte-wise comparison of the whole array is lexicographic comparison.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars);
  static Monomial from_exponents(std::span<const unsigned> exps);

  std::size_t nvars() const noexcept { return n_; }
  unsigned operator[](std::size_t i) const noexcept { return e_[i]; }
  void set(std::size_t i, unsigned exp);
  unsigned degree() const noexcept { return deg_; }
  /// Bit i set iff variable i occurs.
  std::uint64_t support() const noexcept { return mask_; }
  bool is_one() const noexcept { return deg_ == 0; }

  bool divides(const Monomial& other) const noexcept {
    if ((mask_ & ~other.mask_) != 0 || deg_ > other.deg_) return false;
    for (std::size_t i = 0; i < n_; ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }
  bool coprime(const Monomial& other) const noexcept { return (mask_ & other.mask_) == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// a / b; requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend Monomial lcm(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.n_ == b.n_ && std::memcmp(a.e_.data(), b.e_.data(), kMaxVars) == 0;
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) noexcept { return !(a == b); }
  /// Lexicographic with variable 0 most significant; the canonical storage order.
  friend int lex_compare(const Monomial& a, const Monomial& b) noexcept {
    return std::memcmp(a.e_.data(), b.e_.data(), kMaxVars);
  }

  std::vector<unsigned> exponents() const;
  std::string to_string() const;

private:
  void recompute();

  std::array<std::uint8_t, kMaxVars> e_{};
  std::uint64_t mask_ = 0;
  std::uint16_t deg_ = 0;
  std::uint8_t n_ = 0;
};

/// Global monomial orders. BlockElim(k) compares the first k variables by
/// degrevlex, then the remaining variables by degrevlex; it eliminates the
/// first k variables.
class MonomialOrder {
public:
  enum class Kind { DegRevLex, Lex, BlockElim };

  constexpr MonomialOrder() = default;
  static constexpr MonomialOrder degrevlex() { return MonomialOrder(Kind::DegRevLex, 0); }
  static constexpr MonomialOrder lex() { return MonomialOrder(Kind::Lex, 0); }
  static constexpr MonomialOrder block_elim(std::size_t k) { return MonomialOrder(Kind::BlockElim, k); }

  Kind kind() const noexcept { return kind_; }
  std::size_t elim_count() const noexcept { return elim_; }

  /// Negative, zero or positive as a < b, a == b, a > b.
  int compare(const Monomial& a, const Monomial& b) const noexcept;
  bool less(const Monomial& a, const Monomial& b) const noexcept { return compare(a, b) < 0; }

  std::string to_string() const;
  friend bool operator==(MonomialOrder a, MonomialOrder b) noexcept {
    return a.kind_ == b.kind_ && a.elim_ == b.elim_;
  }

private:
  constexpr MonomialOrder(Kind k, std::size_t e) : kind_(k), elim_(e) {}
  Kind kind_ = Kind::DegRevLex;
  std::size_t elim_ = 0;
};

}  // namespace mlv
