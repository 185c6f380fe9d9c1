#include "doctest.h"
#include "test_util.hpp"

#include <bit>
#include <sstream>

#include "mlv/groebner.hpp"

using namespace mlvtest;

namespace {

IdealPresentation ideal(std::vector<MultiPoly> gens, MonomialOrder ord = MonomialOrder::degrevlex()) {
  return IdealPresentation::of(std::move(gens), ord);
}

/// S-polynomial computed directly through MultiPoly arithmetic.
MultiPoly spoly(const MultiPoly& f, const MultiPoly& g, MonomialOrder ord) {
  auto [mf, cf] = leading_term(f, ord);
  auto [mg, cg] = leading_term(g, ord);
  Monomial l = lcm(mf, mg);
  return f.mul_term(l / mf, cf.inverse()) - g.mul_term(l / mg, cg.inverse());
}

/// Largest variable subset containing no leading-monomial support, by enumeration.
int brute_dimension(const std::vector<std::uint64_t>& supports, std::size_t n) {
  int best = -1;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    bool ok = true;
    for (auto m : supports)
      if ((m & ~s) == 0) ok = false;
    if (ok) best = std::max(best, std::popcount(s));
  }
  return best;
}

}  // namespace

TEST_CASE("buchberger examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(2);
  auto x = var(Q, b, 0), y = var(Q, b, 1), one = cst(Q, b, 1);
  auto G = buchberger(ideal({x * x - one, x * y - one}, MonomialOrder::lex()));
  REQUIRE(G.basis.size() == 2);
  CHECK(G.basis[0] == y * y - one);
  CHECK(G.basis[1] == x - y);
  auto H = buchberger(ideal({x, y}));
  REQUIRE(H.basis.size() == 2);
  CHECK(H.basis[0] == y);
  CHECK(H.basis[1] == x);
  auto M = buchberger(ideal({q(3) * x * y + q(6) * y}));
  REQUIRE(M.basis.size() == 1);
  CHECK(M.basis[0] == x * y + q(2) * y);
}

TEST_CASE("normal_form examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(2);
  auto x = var(Q, b, 0), y = var(Q, b, 1), one = cst(Q, b, 1);
  auto G = buchberger(ideal({x - y, y * y - one}, MonomialOrder::lex()));
  CHECK(normal_form(x * x, G) == one);
  for (const auto& g : G.basis) CHECK(normal_form(g, G).is_zero());
  auto H = buchberger(ideal({x, y}));
  CHECK(normal_form(one, H) == one);
}

TEST_CASE("ideal_dimension examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(3);
  auto x1 = var(Q, b, 0), x2 = var(Q, b, 1), x3 = var(Q, b, 2);
  CHECK(ideal_dimension(buchberger(ideal({x1 * x2, x1 * x3}))) == 2);
  CHECK(ideal_dimension(buchberger(ideal({x1, x2}))) == 1);
  CHECK(ideal_dimension(buchberger(ideal({x1, x2, x3}))) == 0);
  CHECK(ideal_dimension(buchberger(ideal({cst(Q, b, 1)}))) == -1);
  CHECK(ideal_dimension(buchberger(ideal({MultiPoly(Q, b)}))) == 3);
  try {
    ideal_dimension(buchberger(ideal({x1}, MonomialOrder::lex())));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongOrder);
  }
}

TEST_CASE("saturate examples") {
  const auto Q = FieldId::rationals();
  const auto b2 = VarBlocks::single(2);
  auto x = var(Q, b2, 0), y = var(Q, b2, 1);
  auto s1 = buchberger(saturate(ideal({x * y}), x));
  REQUIRE(s1.basis.size() == 1);
  CHECK(s1.basis[0] == y);
  CHECK(is_trivial_ideal(buchberger(saturate(ideal({x * x}), x))));
  CHECK(is_trivial_ideal(buchberger(saturate(ideal({x}), x))));

  const auto b4 = VarBlocks::single(4);
  auto a = var(Q, b4, 0), bb = var(Q, b4, 1), c = var(Q, b4, 2), d = var(Q, b4, 3);
  auto det = a * d - bb * c;
  auto sat = saturate_basis(ideal({det}), a);
  CHECK(sat.basis == buchberger(ideal({det})).basis);
}

TEST_CASE("is_trivial_ideal examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(2);
  auto x = var(Q, b, 0), y = var(Q, b, 1);
  CHECK(is_trivial_ideal(buchberger(ideal({x, y, cst(Q, b, 1)}))));
  CHECK(!is_trivial_ideal(buchberger(ideal({x - y}))));
}

TEST_CASE("step budget is enforced") {
  const auto P = FieldId::prime(32003);
  const auto b = VarBlocks::single(4);
  Rng rng(3);
  std::vector<MultiPoly> gens;
  for (int i = 0; i < 4; ++i) gens.push_back(random_poly(P, b, rng, 6, 3));
  GroebnerOptions tiny;
  tiny.step_budget = 5;
  try {
    buchberger(ideal(gens), tiny);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResourceLimit);
  }
}

TEST_CASE("trace prints one line per pair") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(2);
  auto x = var(Q, b, 0), y = var(Q, b, 1);
  std::ostringstream os;
  GroebnerOptions o;
  o.trace = &os;
  buchberger(ideal({x * x - y, x * y - cst(Q, b, 1)}), o);
  CHECK(os.str().find("pair 0") != std::string::npos);
}

TEST_CASE("S-polynomials of returned bases reduce to zero") {
  const auto P = FieldId::prime(101);
  Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 3;
    const auto b = VarBlocks::single(n);
    std::vector<MultiPoly> gens;
    const int k = 1 + static_cast<int>(rng.uniform(0, 2));
    for (int i = 0; i < k; ++i) gens.push_back(random_poly(P, b, rng, 3, 3));
    bool any = false;
    for (auto& g : gens) any = any || !g.is_zero();
    if (!any) continue;
    const auto ord = (t % 2 == 0 || n > 2) ? MonomialOrder::degrevlex() : MonomialOrder::lex();
    auto G = buchberger(ideal(gens, ord));
    for (std::size_t i = 0; i < G.basis.size(); ++i)
      for (std::size_t j = i + 1; j < G.basis.size(); ++j)
        REQUIRE(normal_form(spoly(G.basis[i], G.basis[j], ord), G).is_zero());
    for (const auto& g : gens) REQUIRE(normal_form(g, G).is_zero());
    // Reducedness.
    for (const auto& g : G.basis) {
      REQUIRE(leading_term(g, ord).second.is_one());
      for (const auto& h : G.basis) {
        if (&g == &h) continue;
        const auto lm = leading_term(h, ord).first;
        for (const auto& term : g.terms()) REQUIRE(!lm.divides(term.mono));
      }
    }
  }
}

TEST_CASE("monomial ideal dimension matches enumeration") {
  const auto P = FieldId::prime(101);
  Rng rng(77);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.uniform(0, 7);
    const auto b = VarBlocks::single(n);
    std::vector<MultiPoly> gens;
    std::vector<std::uint64_t> supports;
    const int k = static_cast<int>(rng.uniform(1, 5));
    for (int i = 0; i < k; ++i) {
      Monomial m(n);
      for (std::size_t v = 0; v < n; ++v)
        if (rng.bernoulli(0.35)) m.set(v, static_cast<unsigned>(rng.uniform(1, 2)));
      gens.push_back(MultiPoly::monomial(P, b, m, Scalar::one(P)));
      supports.push_back(m.support());
    }
    REQUIRE(ideal_dimension(buchberger(ideal(gens))) == brute_dimension(supports, n));
  }
}

TEST_CASE("dimension agrees between Q and a prime field") {
  const auto Q = FieldId::rationals();
  Rng rng(55);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const auto b = VarBlocks::single(3);
    std::vector<MultiPoly> gens;
    for (int i = 0; i < 2; ++i) gens.push_back(random_poly(Q, b, rng, 3, 2, 4));
    if (gens[0].is_zero() && gens[1].is_zero()) continue;
    const int dq = ideal_dimension(buchberger(ideal(gens)));
    bool agreed = false;
    for (auto p : kVerificationPrimes) {
      try {
        std::vector<MultiPoly> red;
        for (auto& g : gens) red.push_back(g.reduce_to(FieldId::prime(p)));
        if (ideal_dimension(buchberger(ideal(red))) == dq) {
          agreed = true;
          break;
        }
      } catch (const Error&) {
      }
    }
    CHECK(agreed);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("saturation is idempotent") {
  const auto P = FieldId::prime(101);
  Rng rng(66);
  for (int t = 0; t < 40; ++t) {
    const auto b = VarBlocks::single(3);
    std::vector<MultiPoly> gens{random_poly(P, b, rng, 3, 2), random_poly(P, b, rng, 3, 2)};
    auto g = random_poly(P, b, rng, 2, 2);
    if (g.is_zero() || (gens[0].is_zero() && gens[1].is_zero())) continue;
    auto s1 = saturate(ideal(gens), g);
    auto s2 = saturate_basis(s1, g);
    CHECK(buchberger(s1).basis == s2.basis);
  }
}

TEST_CASE("min_hitting_set") {
  CHECK(min_hitting_set({}) == 0);
  CHECK(min_hitting_set({0b11, 0b1100}) == 2);
  CHECK(min_hitting_set({0b11, 0b110, 0b101}) == 2);
  CHECK(min_hitting_set({0b1, 0}) == -1);
}

TEST_CASE("saturation_dimension agrees with the eliminated saturation") {
  Rng rng(314);
  for (const FieldId f : {FieldId::prime(101), FieldId::rationals()}) {
    for (int t = 0; t < 40; ++t) {
      const auto b = VarBlocks::single(2 + static_cast<std::size_t>(t % 3));
      std::vector<MultiPoly> gens{random_poly(f, b, rng, 3, 3), random_poly(f, b, rng, 2, 3)};
      auto g = random_poly(f, b, rng, 2, 2);
      if (g.is_zero() || (gens[0].is_zero() && gens[1].is_zero())) continue;
      CHECK(saturation_dimension(ideal(gens), g) == ideal_dimension(saturate_basis(ideal(gens), g)));
    }
  }
  const auto Q = FieldId::rationals();
  const auto b2 = VarBlocks::single(2);
  auto x = var(Q, b2, 0), y = var(Q, b2, 1);
  CHECK(saturation_dimension(ideal({x * y}), x) == 1);
  CHECK(saturation_dimension(ideal({x * x}), x) == -1);
  CHECK(saturation_dimension(ideal({x * y}), q(1) * x + q(1) * y) == 1);
}
