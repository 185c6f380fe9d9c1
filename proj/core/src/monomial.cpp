#include "mlv/monomial.hpp"

#include <algorithm>

namespace mlv {

Monomial::Monomial(std::size_t nvars) {
  MLV_REQUIRE(nvars <= kMaxVars, ErrorCode::SizeError,
          "ring has " + std::to_string(nvars) + " variables, limit is 64");
  n_ = static_cast<std::uint8_t>(nvars);
}

Monomial Monomial::from_exponents(std::span<const unsigned> exps) {
  Monomial m(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) {
    MLV_REQUIRE(exps[i] <= kMaxExponent, ErrorCode::ResourceLimit, "exponent exceeds 255");
    m.e_[i] = static_cast<std::uint8_t>(exps[i]);
  }
  m.recompute();
  return m;
}

void Monomial::set(std::size_t i, unsigned exp) {
  MLV_REQUIRE(i < n_, ErrorCode::LengthMismatch, "variable index out of range");
  MLV_REQUIRE(exp <= kMaxExponent, ErrorCode::ResourceLimit, "exponent exceeds 255");
  e_[i] = static_cast<std::uint8_t>(exp);
  recompute();
}

void Monomial::recompute() {
  deg_ = 0;
  mask_ = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    deg_ = static_cast<std::uint16_t>(deg_ + e_[i]);
    if (e_[i] != 0) mask_ |= (std::uint64_t{1} << i);
  }
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.n_ = a.n_;
  for (std::size_t i = 0; i < a.n_; ++i) {
    unsigned s = unsigned{a.e_[i]} + b.e_[i];
    if (s > kMaxExponent) fail(ErrorCode::ResourceLimit, "exponent exceeds 255");
    m.e_[i] = static_cast<std::uint8_t>(s);
  }
  m.deg_ = static_cast<std::uint16_t>(a.deg_ + b.deg_);
  m.mask_ = a.mask_ | b.mask_;
  return m;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.n_ = a.n_;
  for (std::size_t i = 0; i < a.n_; ++i) m.e_[i] = static_cast<std::uint8_t>(a.e_[i] - b.e_[i]);
  m.recompute();
  return m;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.n_ = a.n_;
  for (std::size_t i = 0; i < a.n_; ++i) m.e_[i] = std::max(a.e_[i], b.e_[i]);
  m.recompute();
  return m;
}

std::vector<unsigned> Monomial::exponents() const {
  std::vector<unsigned> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = e_[i];
  return out;
}

std::string Monomial::to_string() const {
  if (deg_ == 0) return "1";
  std::string s;
  for (std::size_t i = 0; i < n_; ++i) {
    if (e_[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i);
    if (e_[i] > 1) s += "^" + std::to_string(e_[i]);
  }
  return s;
}

namespace {

int degrevlex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
  unsigned da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = hi; i-- > lo;) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const noexcept {
  switch (kind_) {
    case Kind::Lex: {
      int c = lex_compare(a, b);
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::DegRevLex: {
      if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
      for (std::size_t i = a.nvars(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
      }
      return 0;
    }
    case Kind::BlockElim: {
      const std::size_t k = std::min(elim_, a.nvars());
      if (int c = degrevlex_range(a, b, 0, k); c != 0) return c;
      return degrevlex_range(a, b, k, a.nvars());
    }
  }
  return 0;
}

std::string MonomialOrder::to_string() const {
  switch (kind_) {
    case Kind::DegRevLex: return "degrevlex";
    case Kind::Lex: return "lex";
    case Kind::BlockElim: return "block_elim(" + std::to_string(elim_) + ")";
  }
  return "?";
}

}  // namespace mlv
