#include "mlv/multipoly.hpp"

#include <algorithm>
#include <numeric>

namespace mlv {

VarBlocks::VarBlocks(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  offsets_.reserve(sizes_.size());
  for (auto n : sizes_) {
    MLV_REQUIRE(n > 0, ErrorCode::SizeError, "block sizes must be positive");
    offsets_.push_back(total_);
    total_ += n;
  }
  MLV_REQUIRE(total_ <= kMaxVars, ErrorCode::SizeError,
              "ring has " + std::to_string(total_) + " variables, limit is 64");
}

std::size_t VarBlocks::block_of(std::size_t v) const {
  MLV_REQUIRE(v < total_, ErrorCode::LengthMismatch, "variable index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), v);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

namespace {

bool term_less(const Term& a, const Term& b) { return lex_compare(a.mono, b.mono) < 0; }

void canonicalize(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), term_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    Scalar c = std::move(terms[i].coef);
    while (j < terms.size() && terms[j].mono == terms[i].mono) c += terms[j++].coef;
    if (!c.is_zero()) {
      terms[out].mono = terms[i].mono;
      terms[out].coef = std::move(c);
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

}  // namespace

MultiPoly::MultiPoly(FieldId field, VarBlocks blocks) : field_(field), blocks_(std::move(blocks)) {}

MultiPoly MultiPoly::constant(FieldId field, const VarBlocks& blocks, const Scalar& c) {
  return monomial(field, blocks, Monomial(blocks.total()), c);
}

MultiPoly MultiPoly::variable(FieldId field, const VarBlocks& blocks, std::size_t var) {
  Monomial m(blocks.total());
  m.set(var, 1);
  return monomial(field, blocks, m, Scalar::one(field));
}

MultiPoly MultiPoly::monomial(FieldId field, const VarBlocks& blocks, const Monomial& m, const Scalar& c) {
  MLV_REQUIRE(c.field() == field, ErrorCode::FieldMismatch, "coefficient field differs from ring field");
  MLV_REQUIRE(m.nvars() == blocks.total(), ErrorCode::LengthMismatch, "monomial length differs from ring size");
  MultiPoly p(field, blocks);
  if (!c.is_zero()) p.terms_.push_back({m, c});
  return p;
}

MultiPoly MultiPoly::from_terms(FieldId field, const VarBlocks& blocks, std::vector<Term> terms) {
  MultiPoly p(field, blocks);
  for (const auto& t : terms) {
    MLV_REQUIRE(t.coef.field() == field, ErrorCode::FieldMismatch, "coefficient field differs from ring field");
    MLV_REQUIRE(t.mono.nvars() == blocks.total(), ErrorCode::LengthMismatch,
                "monomial length differs from ring size");
  }
  canonicalize(terms);
  p.terms_ = std::move(terms);
  return p;
}

Scalar MultiPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{m, Scalar(field_)}, term_less);
  if (it != terms_.end() && it->mono == m) return it->coef;
  return Scalar(field_);
}

Scalar MultiPoly::constant_term() const {
  if (!terms_.empty() && terms_.front().mono.is_one()) return terms_.front().coef;
  return Scalar(field_);
}

unsigned MultiPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

bool MultiPoly::is_homogeneous() const {
  for (const auto& t : terms_)
    if (t.mono.degree() != terms_.front().mono.degree()) return false;
  return true;
}

std::vector<unsigned> MultiPoly::block_degrees() const {
  std::vector<unsigned> out(blocks_.num_blocks(), 0);
  for (const auto& t : terms_) {
    for (std::size_t b = 0; b < blocks_.num_blocks(); ++b) {
      unsigned d = 0;
      for (std::size_t s = 0; s < blocks_.size(b); ++s) d += t.mono[blocks_.offset(b) + s];
      out[b] = std::max(out[b], d);
    }
  }
  return out;
}

std::uint64_t MultiPoly::support() const {
  std::uint64_t m = 0;
  for (const auto& t : terms_) m |= t.mono.support();
  return m;
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (field_ != o.field_) fail(ErrorCode::FieldMismatch, "polynomials over different fields");
  if (blocks_ != o.blocks_) fail(ErrorCode::BlockMismatch, "polynomials in different rings");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_compatible(o);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    int c = i == terms_.size() ? 1 : j == o.terms_.size() ? -1 : lex_compare(terms_[i].mono, o.terms_[j].mono);
    if (c < 0) {
      out.push_back(std::move(terms_[i++]));
    } else if (c > 0) {
      out.push_back(o.terms_[j++]);
    } else {
      Scalar s = terms_[i].coef + o.terms_[j].coef;
      if (!s.is_zero()) out.push_back({terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_compatible(b);
  MultiPoly r(a.field_, a.blocks_);
  if (a.is_zero() || b.is_zero()) return r;
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({s.mono * t.mono, s.coef * t.coef});
  canonicalize(prod);
  r.terms_ = std::move(prod);
  return r;
}

MultiPoly operator*(const Scalar& c, const MultiPoly& p) {
  if (c.field() != p.field_) fail(ErrorCode::FieldMismatch, "scalar field differs from ring field");
  MultiPoly r(p.field_, p.blocks_);
  if (c.is_zero()) return r;
  r.terms_ = p.terms_;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.field_ != b.field_ || a.blocks_ != b.blocks_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
  return true;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(field_, blocks_, Scalar::one(field_));
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::mul_term(const Monomial& m, const Scalar& c) const {
  MultiPoly r(field_, blocks_);
  if (c.is_zero()) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
  // Multiplying by a monomial preserves lex order.
  return r;
}

Scalar MultiPoly::evaluate(std::span<const Scalar> point) const {
  MLV_REQUIRE(point.size() == nvars(), ErrorCode::LengthMismatch,
              "point has " + std::to_string(point.size()) + " coordinates, ring has " + std::to_string(nvars()));
  for (const auto& x : point)
    if (x.field() != field_) fail(ErrorCode::FieldMismatch, "point field differs from ring field");
  // Cache powers per variable; exponents are small.
  std::vector<std::vector<Scalar>> powers(nvars());
  auto power = [&](std::size_t v, unsigned e) -> const Scalar& {
    auto& pv = powers[v];
    if (pv.empty()) pv.push_back(Scalar::one(field_));
    while (pv.size() <= e) pv.push_back(pv.back() * point[v]);
    return pv[e];
  };
  Scalar acc(field_);
  for (const auto& t : terms_) {
    Scalar v = t.coef;
    for (std::size_t i = 0; i < nvars() && !v.is_zero(); ++i)
      if (t.mono[i] != 0) v *= power(i, t.mono[i]);
    acc += v;
  }
  return acc;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  MLV_REQUIRE(var < nvars(), ErrorCode::LengthMismatch, "variable index out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const unsigned e = t.mono[var];
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set(var, e - 1);
    Scalar c = t.coef * Scalar(field_, static_cast<long>(e));
    if (!c.is_zero()) out.push_back({m, std::move(c)});
  }
  MultiPoly r(field_, blocks_);
  // Lowering one exponent can reorder terms.
  canonicalize(out);
  r.terms_ = std::move(out);
  return r;
}

MultiPoly MultiPoly::with_blocks(VarBlocks blocks) const {
  MLV_REQUIRE(blocks.total() == nvars(), ErrorCode::BlockMismatch, "block structure changes variable count");
  MultiPoly r = *this;
  r.blocks_ = std::move(blocks);
  return r;
}

MultiPoly MultiPoly::reduce_to(FieldId target) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.mono, t.coef.reduce_to(target)});
  return from_terms(target, blocks_, std::move(out));
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    if (it->mono.is_one()) {
      s += it->coef.to_string();
    } else if (it->coef.is_one()) {
      s += it->mono.to_string();
    } else {
      s += "(" + it->coef.to_string() + ")*" + it->mono.to_string();
    }
  }
  return s;
}

MultiPoly poly_ring_ops(const MultiPoly& p, const MultiPoly& q, RingOp op) {
  switch (op) {
    case RingOp::Add: return p + q;
    case RingOp::Sub: return p - q;
    case RingOp::Mul: return p * q;
    case RingOp::ScalarMul:
      MLV_REQUIRE(q.is_constant(), ErrorCode::BadParams, "ScalarMul needs a constant right operand");
      if (p.field() != q.field()) fail(ErrorCode::FieldMismatch, "polynomials over different fields");
      return q.constant_term() * p;
  }
  return p;
}

Scalar evaluate(const MultiPoly& p, std::span<const Scalar> point) { return p.evaluate(point); }

MultiPoly compose(const MultiPoly& p, const std::vector<MultiPoly>& images) {
  MLV_REQUIRE(images.size() == p.nvars(), ErrorCode::LengthMismatch, "one image per variable is required");
  MLV_REQUIRE(!images.empty() || p.nvars() == 0, ErrorCode::LengthMismatch, "no images");
  if (images.empty()) return p;
  const FieldId f = images.front().field();
  const VarBlocks& target = images.front().blocks();
  std::vector<std::vector<MultiPoly>> powers(images.size());
  auto power = [&](std::size_t v, unsigned e) -> const MultiPoly& {
    auto& pv = powers[v];
    if (pv.empty()) pv.push_back(MultiPoly::constant(f, target, Scalar::one(f)));
    while (pv.size() <= e) pv.push_back(pv.back() * images[v]);
    return pv[e];
  };
  MultiPoly acc(f, target);
  for (const auto& t : p.terms()) {
    MultiPoly term = MultiPoly::constant(f, target, t.coef);
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (t.mono[i] != 0) term = term * power(i, t.mono[i]);
    acc += term;
  }
  return acc;
}

MultiPoly shift_substitute(const MultiPoly& p, std::span<const Scalar> v, const std::vector<std::size_t>& fixed_blocks) {
  MLV_REQUIRE(v.size() == p.nvars(), ErrorCode::LengthMismatch,
              "shift point has " + std::to_string(v.size()) + " coordinates, ring has " + std::to_string(p.nvars()));
  const VarBlocks& b = p.blocks();
  std::vector<bool> fixed(b.num_blocks(), false);
  for (auto j : fixed_blocks) {
    MLV_REQUIRE(j < b.num_blocks(), ErrorCode::LengthMismatch, "fixed block index out of range");
    fixed[j] = true;
  }
  std::vector<MultiPoly> images;
  images.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    MultiPoly img = MultiPoly::constant(p.field(), b, v[i]);
    if (!fixed[b.block_of(i)]) img += MultiPoly::variable(p.field(), b, i);
    images.push_back(std::move(img));
  }
  return compose(p, images);
}

std::pair<Monomial, Scalar> leading_term(const MultiPoly& p, MonomialOrder order) {
  MLV_REQUIRE(!p.is_zero(), ErrorCode::ZeroPolynomial, "leading term of the zero polynomial");
  const Term* best = &p.terms().front();
  for (const auto& t : p.terms())
    if (order.less(best->mono, t.mono)) best = &t;
  return {best->mono, best->coef};
}

MultiPoly exact_divide(const MultiPoly& p, const MultiPoly& q) {
  MLV_REQUIRE(!q.is_zero(), ErrorCode::DivisionByZero, "division by the zero polynomial");
  if (p.field() != q.field()) fail(ErrorCode::FieldMismatch, "polynomials over different fields");
  // Terms are stored in ascending lex, so the lex leading term is the last one.
  const Term& lq = q.terms().back();
  const Scalar inv = lq.coef.inverse();
  MultiPoly rem = p;
  MultiPoly quot(p.field(), p.blocks());
  while (!rem.is_zero()) {
    const Term& lr = rem.terms().back();
    if (!lq.mono.divides(lr.mono)) fail(ErrorCode::BadParams, "polynomial division is not exact");
    const Monomial m = lr.mono / lq.mono;
    const Scalar c = lr.coef * inv;
    quot += MultiPoly::monomial(p.field(), p.blocks(), m, c);
    rem -= q.mul_term(m, c);
  }
  return quot;
}

}  // namespace mlv
