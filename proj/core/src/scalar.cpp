#include "mlv/scalar.hpp"

#include <charconv>

namespace mlv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NonInvertibleDenominator: return "NonInvertibleDenominator";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::BlockMismatch: return "BlockMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SizeError: return "SizeError";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::WrongOrder: return "WrongOrder";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::BadCharacteristic: return "BadCharacteristic";
    case ErrorCode::NotHomogeneous: return "NotHomogeneous";
    case ErrorCode::NotForm: return "NotForm";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::TrivialSystem: return "TrivialSystem";
    case ErrorCode::SingularPivot: return "SingularPivot";
    case ErrorCode::NotASolution: return "NotASolution";
    case ErrorCode::DegenerateSampling: return "DegenerateSampling";
    case ErrorCode::PivotDenominatorZero: return "PivotDenominatorZero";
    case ErrorCode::NoRationalPointFound: return "NoRationalPointFound";
    case ErrorCode::TooManyPolynomials: return "TooManyPolynomials";
    case ErrorCode::FiniteFieldUnsupported: return "FiniteFieldUnsupported";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::MalformedCert: return "MalformedCert";
    case ErrorCode::CheckFailed: return "CheckFailed";
  }
  return "Unknown";
}

FieldId FieldId::prime(std::uint64_t p) {
  MLV_REQUIRE(p >= 2, ErrorCode::BadParams, "modulus must be >= 2");
  mpz_class z(static_cast<unsigned long>(p));
  MLV_REQUIRE(mpz_probab_prime_p(z.get_mpz_t(), 40) != 0, ErrorCode::BadParams,
          "modulus " + std::to_string(p) + " is not prime");
  return FieldId(p);
}

FieldId FieldId::parse(std::string_view text) {
  if (text == "Q" || text == "QQ") return rationals();
  if (text.size() > 2 && (text.substr(0, 2) == "F:" || text.substr(0, 2) == "F_")) {
    std::uint64_t p = 0;
    auto body = text.substr(2);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
    MLV_REQUIRE(ec == std::errc() && ptr == body.data() + body.size(), ErrorCode::MalformedInput,
            "bad field '" + std::string(text) + "'");
    return prime(p);
  }
  fail(ErrorCode::MalformedInput, "bad field '" + std::string(text) + "'");
}

std::string FieldId::to_string() const {
  return is_rationals() ? std::string("Q") : "F:" + std::to_string(modulus_);
}

namespace modp {

std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) fail(ErrorCode::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
  // Extended Euclid on signed 128-bit to stay exact for p < 2^63.
  __int128 t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t from_mpz(const mpz_class& z, std::uint64_t p) {
  static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long required");
  return mpz_fdiv_ui(z.get_mpz_t(), p);
}

}  // namespace modp

Scalar::Scalar(FieldId field) : field_(field) {
  if (field.is_prime_field()) v_ = std::uint64_t{0};
}

Scalar::Scalar(FieldId field, long value) : field_(field) {
  if (field.is_prime_field()) {
    v_ = modp::from_mpz(mpz_class(value), field.modulus());
  } else {
    v_ = mpq_class(value);
  }
}

Scalar Scalar::make(FieldId field, const mpz_class& num, const mpz_class& den) {
  MLV_REQUIRE(den != 0, ErrorCode::ZeroDenominator, "denominator is zero");
  Scalar s(field);
  if (field.is_prime_field()) {
    const std::uint64_t p = field.modulus();
    const std::uint64_t d = modp::from_mpz(den, p);
    if (d == 0) fail(ErrorCode::NonInvertibleDenominator, "denominator divisible by " + std::to_string(p));
    s.v_ = modp::mul(modp::from_mpz(num, p), modp::inv(d, p), p);
  } else {
    mpq_class q(num, den);
    q.canonicalize();
    s.v_ = std::move(q);
  }
  return s;
}

Scalar Scalar::from_rational(FieldId field, const mpq_class& q) {
  return make(field, q.get_num(), q.get_den());
}

Scalar Scalar::parse(FieldId field, std::string_view text) {
  std::string t(text);
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  try {
    if (auto pos = t.find("mod"); pos != std::string::npos) {
      MLV_REQUIRE(field.is_prime_field(), ErrorCode::FieldMismatch, "residue given for Q");
      std::string mod = trim(t.substr(pos + 3));
      MLV_REQUIRE(std::stoull(mod) == field.modulus(), ErrorCode::FieldMismatch,
              "modulus mismatch in '" + t + "'");
      return make(field, mpz_class(trim(t.substr(0, pos))), 1);
    }
    if (auto pos = t.find('/'); pos != std::string::npos) {
      return make(field, mpz_class(trim(t.substr(0, pos))), mpz_class(trim(t.substr(pos + 1))));
    }
    return make(field, mpz_class(trim(t)), 1);
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::MalformedInput, "bad scalar '" + t + "'");
  }
}

bool Scalar::is_zero() const noexcept {
  if (field_.is_prime_field()) return std::get<std::uint64_t>(v_) == 0;
  return sgn(std::get<mpq_class>(v_)) == 0;
}

bool Scalar::is_one() const noexcept {
  if (field_.is_prime_field()) return std::get<std::uint64_t>(v_) == 1;
  return std::get<mpq_class>(v_) == 1;
}

Scalar Scalar::inverse() const {
  MLV_REQUIRE(!is_zero(), ErrorCode::DivisionByZero, "inverse of zero");
  Scalar s(field_);
  if (field_.is_prime_field()) {
    s.v_ = modp::inv(residue(), field_.modulus());
  } else {
    s.v_ = mpq_class(1) / rational();
  }
  return s;
}

Scalar invert(const Scalar& x) { return x.inverse(); }

Scalar Scalar::operator-() const {
  Scalar s(field_);
  if (field_.is_prime_field()) {
    s.v_ = modp::sub(0, residue(), field_.modulus());
  } else {
    s.v_ = mpq_class(-rational());
  }
  return s;
}

#define MLV_CHECK_FIELDS(o) \
  if (field_ != (o).field_) fail(ErrorCode::FieldMismatch, field_.to_string() + " vs " + (o).field_.to_string())

Scalar& Scalar::operator+=(const Scalar& o) {
  MLV_CHECK_FIELDS(o);
  if (field_.is_prime_field()) {
    v_ = modp::add(residue(), o.residue(), field_.modulus());
  } else {
    std::get<mpq_class>(v_) += o.rational();
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  MLV_CHECK_FIELDS(o);
  if (field_.is_prime_field()) {
    v_ = modp::sub(residue(), o.residue(), field_.modulus());
  } else {
    std::get<mpq_class>(v_) -= o.rational();
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  MLV_CHECK_FIELDS(o);
  if (field_.is_prime_field()) {
    v_ = modp::mul(residue(), o.residue(), field_.modulus());
  } else {
    std::get<mpq_class>(v_) *= o.rational();
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  MLV_CHECK_FIELDS(o);
  return *this *= o.inverse();
}

#undef MLV_CHECK_FIELDS

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.field_ != b.field_) return false;
  if (a.field_.is_prime_field()) return a.residue() == b.residue();
  return a.rational() == b.rational();
}

Scalar Scalar::reduce_to(FieldId target) const {
  if (target == field_) return *this;
  MLV_REQUIRE(field_.is_rationals(), ErrorCode::FieldMismatch, "can only reduce rationals");
  return make(target, rational().get_num(), rational().get_den());
}

std::size_t Scalar::bit_size() const {
  if (field_.is_prime_field()) return 0;
  const auto& q = rational();
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

std::string Scalar::to_string() const {
  if (field_.is_prime_field()) return std::to_string(residue()) + " mod " + std::to_string(field_.modulus());
  const auto& q = rational();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Scalar sample_scalar(FieldId field, int height_bound, Rng& rng) {
  MLV_REQUIRE(height_bound >= 1, ErrorCode::BadParams, "height bound must be >= 1");
  if (field.is_prime_field()) {
    auto r = static_cast<unsigned long>(rng.uniform(0, static_cast<std::int64_t>(field.modulus() - 1)));
    return Scalar::make(field, mpz_class(r), 1);
  }
  long num = static_cast<long>(rng.uniform(-height_bound, height_bound));
  long den = static_cast<long>(rng.uniform(1, height_bound));
  return Scalar::make(field, mpz_class(num), mpz_class(den));
}

Scalar sample_nonzero_scalar(FieldId field, int height_bound, Rng& rng) {
  for (;;) {
    Scalar s = sample_scalar(field, height_bound, rng);
    if (!s.is_zero()) return s;
  }
}

}  // namespace mlv
