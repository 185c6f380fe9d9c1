#include "doctest.h"
#include "test_util.hpp"

#include "mlv/poly_json.hpp"
#include "mlv/poly_matrix.hpp"

using namespace mlvtest;

TEST_CASE("ring operation examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(2);
  auto x = var(Q, b, 0), y = var(Q, b, 1);
  CHECK((x + y) * (x - y) == x * x - y * y);
  CHECK(((x + y) + (-(x + y))).is_zero());
  const auto F2 = FieldId::prime(2);
  auto u = var(F2, b, 0), v = var(F2, b, 1);
  CHECK((u + v).pow(2) == u * u + v * v);
  CHECK(poly_ring_ops(x, cst(Q, b, 3), RingOp::ScalarMul) == q(3) * x);
}

TEST_CASE("ring operation errors") {
  const auto b = VarBlocks::single(2);
  auto x = var(FieldId::rationals(), b, 0);
  auto y = var(FieldId::prime(7), b, 0);
  auto z = var(FieldId::rationals(), VarBlocks({1, 1}), 0);
  try {
    (void)(x + y);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FieldMismatch);
  }
  try {
    (void)(x * z);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BlockMismatch);
  }
}

TEST_CASE("evaluate examples") {
  const auto Q = FieldId::rationals();
  const auto b2 = VarBlocks::single(2);
  auto p = var(Q, b2, 0).pow(2) + var(Q, b2, 1).pow(2);
  std::vector<Scalar> pt{q(3), q(4)};
  CHECK(p.evaluate(pt) == q(25));
  const auto b4 = VarBlocks::single(4);
  auto g = var(Q, b4, 0) * var(Q, b4, 1) + var(Q, b4, 2) * var(Q, b4, 3);
  std::vector<Scalar> pt4{q(1), q(2), q(3), q(-1)};
  CHECK(g.evaluate(pt4) == q(-1));
  std::vector<Scalar> zero(4, q(0));
  CHECK((g + cst(Q, b4, 7)).evaluate(zero) == q(7));
  std::vector<Scalar> shortpt{q(1)};
  CHECK_THROWS_AS(g.evaluate(shortpt), Error);
}

TEST_CASE("shift_substitute examples") {
  const auto Q = FieldId::rationals();
  const VarBlocks b({1, 1});
  auto p = var(Q, b, 0) * var(Q, b, 1);
  std::vector<Scalar> v{q(2), q(3)};
  CHECK(shift_substitute(p, v, {1}) == cst(Q, b, 6) + q(3) * var(Q, b, 0));
  CHECK(shift_substitute(p, v, {0, 1}) == cst(Q, b, 6));
  std::vector<Scalar> z{q(0), q(0)};
  CHECK(shift_substitute(p, z, {}) == p);
  std::vector<Scalar> bad{q(0)};
  CHECK_THROWS_AS(shift_substitute(p, bad, {}), Error);
}

TEST_CASE("jacobian examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(4);
  auto P = var(Q, b, 0) * var(Q, b, 1) + var(Q, b, 2) * var(Q, b, 3);
  auto J = jacobian({P, cst(Q, b, 5)});
  CHECK(J(0, 0) == var(Q, b, 1));
  CHECK(J(0, 1) == var(Q, b, 0));
  CHECK(J(0, 2) == var(Q, b, 3));
  CHECK(J(0, 3) == var(Q, b, 2));
  for (std::size_t j = 0; j < 4; ++j) CHECK(J(1, j).is_zero());
  const auto F2 = FieldId::prime(2);
  auto x = var(F2, VarBlocks::single(1), 0);
  CHECK(x.pow(2).derivative(0).is_zero());
}

TEST_CASE("minors examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(4);
  PolyMatrix m(2, 2, Q, b);
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = var(Q, b, i);
  auto ms = minors(m, 2);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0] == var(Q, b, 0) * var(Q, b, 3) - var(Q, b, 1) * var(Q, b, 2));
  auto m1 = minors(m, 1);
  REQUIRE(m1.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(m1[i] == var(Q, b, i));
  CHECK(minors(m, 3).empty());

  // Diagonal slice with 2 rows over variables x0..x2: [[x0,0,0],[0,x1,0]].
  const auto b3 = VarBlocks::single(3);
  PolyMatrix d(2, 3, Q, b3);
  d(0, 0) = var(Q, b3, 0);
  d(1, 1) = var(Q, b3, 1);
  d(0, 2) = var(Q, b3, 2);
  auto dm = minors(d, 2);
  REQUIRE(dm.size() == 3);
  // Column pairs (0,1), (0,2), (1,2); expanded by hand.
  CHECK(dm[0] == var(Q, b3, 0) * var(Q, b3, 1));
  CHECK(dm[1].is_zero());
  CHECK(dm[2] == -(var(Q, b3, 1) * var(Q, b3, 2)));
}

TEST_CASE("minor counts") {
  const auto P = FieldId::prime(101);
  const auto b = VarBlocks::single(3);
  Rng rng(1);
  for (std::size_t r = 1; r <= 4; ++r)
    for (std::size_t c = 1; c <= 4; ++c) {
      PolyMatrix m(r, c, P, b);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = random_poly(P, b, rng, 2, 2);
      auto binom = [](std::size_t n, std::size_t k) {
        std::size_t v = 1;
        for (std::size_t i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
        return v;
      };
      for (std::size_t k = 1; k <= 5; ++k) {
        const auto ms = minors(m, k);
        CHECK(ms.empty() == (k > r || k > c));
        if (k <= r && k <= c) CHECK(ms.size() == binom(r, k) * binom(c, k));
      }
    }
}

TEST_CASE("Bareiss agrees with cofactor expansion at random points") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(3);
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 4 + t % 2;
    PolyMatrix m(n, n, Q, b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.bernoulli(0.7)) m(i, j) = random_poly(Q, b, rng, 2, 2, 3);
    const MultiPoly det = poly_determinant(m);
    for (int s = 0; s < 3; ++s) {
      auto pt = random_point(Q, 3, rng);
      CHECK(det.evaluate(pt) == determinant(m.evaluate(pt)));
    }
  }
}

TEST_CASE("leading_term examples") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(2);
  auto x = var(Q, b, 0), y = var(Q, b, 1);
  auto p = x * x + x * y + y * y;
  CHECK(leading_term(p, MonomialOrder::lex()).first == (x * x).terms()[0].mono);
  CHECK(leading_term(p, MonomialOrder::degrevlex()).first == (x * x).terms()[0].mono);
  auto [m, c] = leading_term(cst(Q, b, 5), MonomialOrder::lex());
  CHECK(m.is_one());
  CHECK(c == q(5));
  try {
    leading_term(MultiPoly(Q, b), MonomialOrder::lex());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroPolynomial);
  }
}

TEST_CASE("monomial orders") {
  auto mono = [](std::vector<unsigned> e) { return Monomial::from_exponents(e); };
  const auto drl = MonomialOrder::degrevlex();
  // x*z^2 vs y^3 under degrevlex: equal degree, smaller last exponent wins.
  CHECK(drl.less(mono({1, 0, 2}), mono({0, 3, 0})));
  CHECK(drl.less(mono({1, 0, 0}), mono({0, 0, 2})));
  CHECK(MonomialOrder::lex().less(mono({0, 0, 2}), mono({1, 0, 0})));
  const auto el = MonomialOrder::block_elim(1);
  CHECK(el.less(mono({0, 5, 5}), mono({1, 0, 0})));
  CHECK(el.less(mono({1, 0, 1}), mono({1, 1, 0})));
  // Multiplicative and 1 minimal.
  Rng rng(2);
  for (auto ord : {drl, MonomialOrder::lex(), el}) {
    for (int t = 0; t < 500; ++t) {
      std::vector<unsigned> a(3), b(3), c(3);
      for (int i = 0; i < 3; ++i) {
        a[i] = rng.uniform(0, 3);
        b[i] = rng.uniform(0, 3);
        c[i] = rng.uniform(0, 3);
      }
      const auto ma = mono(a), mb = mono(b), mc = mono(c);
      CHECK(ord.compare(ma, mb) == ord.compare(ma * mc, mb * mc));
      CHECK(!ord.less(ma, Monomial(3)));
    }
  }
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(VarBlocks({40, 30}), Error);
  std::vector<unsigned> e{300};
  try {
    Monomial::from_exponents(e);
    FAIL("expected throw");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ResourceLimit);
  }
}

TEST_CASE("ring axioms on random triples") {
  for (auto f : {FieldId::rationals(), FieldId::prime(101)}) {
    const VarBlocks b({2, 1});
    Rng rng(Rng::derive(21, f.modulus()));
    for (int t = 0; t < 1000; ++t) {
      auto p = random_poly(f, b, rng, 3, 2), r = random_poly(f, b, rng, 3, 2), s = random_poly(f, b, rng, 3, 2);
      REQUIRE((p + r) + s == p + (r + s));
      REQUIRE((p * r) * s == p * (r * s));
      REQUIRE(p * (r + s) == p * r + p * s);
      REQUIRE(p * r == r * p);
      REQUIRE((p - p).is_zero());
      for (const auto& term : (p * r).terms()) REQUIRE(!term.coef.is_zero());
    }
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  const auto Q = FieldId::rationals();
  const VarBlocks b({2, 2});
  Rng rng(33);
  for (int t = 0; t < 300; ++t) {
    auto p = random_poly(Q, b, rng, 4, 3), r = random_poly(Q, b, rng, 4, 3);
    auto pt = random_point(Q, 4, rng);
    REQUIRE((p * r).evaluate(pt) == p.evaluate(pt) * r.evaluate(pt));
    REQUIRE((p + r).evaluate(pt) == p.evaluate(pt) + r.evaluate(pt));
  }
}

TEST_CASE("shift_substitute preserves multidegree one and is identity at zero") {
  const auto P = FieldId::prime(101);
  const VarBlocks b({2, 2, 1});
  Rng rng(44);
  for (int t = 0; t < 300; ++t) {
    auto p = random_poly(P, b, rng, 6, 2);
    // Truncate to multi-affine terms.
    std::vector<Term> keep;
    for (const auto& term : p.terms()) {
      MultiPoly single = MultiPoly::monomial(P, b, term.mono, term.coef);
      auto d = single.block_degrees();
      if (std::all_of(d.begin(), d.end(), [](unsigned x) { return x <= 1; })) keep.push_back(term);
    }
    auto ma = MultiPoly::from_terms(P, b, keep);
    std::vector<Scalar> zero(5, Scalar(P));
    REQUIRE(shift_substitute(ma, zero, {}) == ma);
    auto v = random_point(P, 5, rng);
    std::vector<std::size_t> fixed;
    for (std::size_t j = 0; j < 3; ++j)
      if (rng.bernoulli(0.5)) fixed.push_back(j);
    auto out = shift_substitute(ma, v, fixed);
    auto d = out.block_degrees();
    for (auto x : d) REQUIRE(x <= 1);
    for (auto j : fixed) REQUIRE(d[j] == 0);
    // Agrees with evaluation at v + x.
    auto x = random_point(P, 5, rng);
    std::vector<Scalar> shifted(5, Scalar(P));
    for (std::size_t i = 0; i < 5; ++i) {
      const bool is_fixed = std::find(fixed.begin(), fixed.end(), b.block_of(i)) != fixed.end();
      shifted[i] = is_fixed ? v[i] : v[i] + x[i];
    }
    REQUIRE(out.evaluate(x) == ma.evaluate(shifted));
  }
}

TEST_CASE("exact division") {
  const auto Q = FieldId::rationals();
  const auto b = VarBlocks::single(3);
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    auto p = random_poly(Q, b, rng, 3, 3), r = random_poly(Q, b, rng, 3, 3);
    if (r.is_zero()) continue;
    CHECK(exact_divide(p * r, r) == p);
  }
  CHECK_THROWS_AS(exact_divide(var(Q, b, 0), var(Q, b, 1)), Error);
}

TEST_CASE("polynomial JSON round trip is canonical") {
  const auto Q = FieldId::rationals();
  const VarBlocks b({2, 1});
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    auto p = random_poly(Q, b, rng, 4, 3);
    auto j = poly_to_json(p);
    CHECK(poly_from_json(j) == p);
    CHECK(poly_to_json(poly_from_json(j)).dump() == j.dump());
  }
  auto p = poly_from_json(nlohmann::json::parse(
      R"({"blocks":[2],"field":"F:7","terms":[{"exp":[1,0],"coef":"3"},{"exp":[1,0],"coef":"4"}]})"));
  CHECK(p.is_zero());
  CHECK_THROWS_AS(poly_from_json(nlohmann::json::parse(R"({"blocks":[2],"field":"Q"})")), Error);
}
