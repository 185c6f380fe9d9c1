#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "mlv/error.hpp"

namespace mlv {

/// The coefficient field: the rationals or a prime field F_p.
class FieldId {
public:
  enum class Kind { Rationals, PrimeField };

  FieldId() = default;

  static FieldId rationals() { return FieldId(); }
  /// Throws BadParams unless p is prime.
  static FieldId prime(std::uint64_t p);
  /// Accepts "Q" or "F:p".
  static FieldId parse(std::string_view text);

  Kind kind() const noexcept { return modulus_ == 0 ? Kind::Rationals : Kind::PrimeField; }
  bool is_rationals() const noexcept { return modulus_ == 0; }
  bool is_prime_field() const noexcept { return modulus_ != 0; }
  /// 0 for the rationals.
  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t characteristic() const noexcept { return modulus_; }

  std::string to_string() const;

  friend bool operator==(FieldId a, FieldId b) noexcept { return a.modulus_ == b.modulus_; }
  friend bool operator!=(FieldId a, FieldId b) noexcept { return a.modulus_ != b.modulus_; }

private:
  explicit FieldId(std::uint64_t p) : modulus_(p) {}
  std::uint64_t modulus_ = 0;
};

/// Verification primes tried in order when a rational computation must be
/// reduced modulo p.
inline constexpr std::uint64_t kVerificationPrimes[] = {101, 32003, 65537};
inline constexpr int kDefaultHeightBound = 10;

/// Exact field element, always stored canonically: rationals in lowest terms
/// with positive denominator, residues in [0, p).
class Scalar {
public:
  Scalar() = default;  // rational zero
  explicit Scalar(FieldId field);  // zero of `field`
  Scalar(FieldId field, long value);

  /// make_scalar: num/den in `field`.
  static Scalar make(FieldId field, const mpz_class& num, const mpz_class& den);
  static Scalar from_rational(FieldId field, const mpq_class& q);
  static Scalar zero(FieldId field) { return Scalar(field); }
  static Scalar one(FieldId field) { return Scalar(field, 1); }
  /// Inverse of to_string: "a/b", "a" (Q) or "r mod p", "r" (F_p).
  static Scalar parse(FieldId field, std::string_view text);

  FieldId field() const noexcept { return field_; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  std::uint64_t residue() const { return std::get<std::uint64_t>(v_); }

  Scalar inverse() const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Image under Q -> F_p; NonInvertibleDenominator when p divides the denominator.
  Scalar reduce_to(FieldId target) const;

  /// Bits of numerator plus denominator (0 for residues).
  std::size_t bit_size() const;

  std::string to_string() const;

private:
  FieldId field_;
  std::variant<mpq_class, std::uint64_t> v_;
};

Scalar invert(const Scalar& x);

inline Scalar make_scalar(FieldId field, long num, long den) {
  return Scalar::make(field, mpz_class(num), mpz_class(den));
}

namespace modp {
inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return (s >= p || s < a) ? s - p : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
std::uint64_t inv(std::uint64_t a, std::uint64_t p);
std::uint64_t from_mpz(const mpz_class& z, std::uint64_t p);
}  // namespace modp

/// Explicit random state; nothing in the library draws ambient entropy.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  bool bernoulli(double prob) { return std::bernoulli_distribution(prob)(eng_); }

  /// Seed of an independent child stream (splitmix64 mixing).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
  std::mt19937_64 eng_;
};

/// Q: numerator uniform in [-h, h], denominator uniform in [1, h].
/// F_p: uniform residue.
Scalar sample_scalar(FieldId field, int height_bound, Rng& rng);
Scalar sample_nonzero_scalar(FieldId field, int height_bound, Rng& rng);

}  // namespace mlv
