#include "doctest.h"
#include "test_util.hpp"

#include "mlv/linalg.hpp"

using namespace mlvtest;

TEST_CASE("make_scalar canonical forms") {
  const auto Q = FieldId::rationals();
  CHECK(make_scalar(Q, 4, -6).to_string() == "-2/3");
  CHECK(make_scalar(Q, 0, 5).to_string() == "0/1");
  CHECK(make_scalar(FieldId::prime(7), 3, 5).residue() == 2);
  CHECK((make_scalar(FieldId::prime(7), 2, 1) * Scalar(FieldId::prime(7), 5)).residue() == 3);
}

TEST_CASE("make_scalar errors") {
  const auto Q = FieldId::rationals();
  CHECK_THROWS_AS(make_scalar(Q, 1, 0), Error);
  try {
    make_scalar(FieldId::prime(7), 1, 14);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonInvertibleDenominator);
  }
  try {
    make_scalar(Q, 1, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDenominator);
  }
  CHECK_THROWS_AS(FieldId::prime(91), Error);
}

TEST_CASE("invert") {
  const auto Q = FieldId::rationals();
  CHECK(invert(make_scalar(Q, -2, 3)) == make_scalar(Q, -3, 2));
  CHECK(invert(Scalar(FieldId::prime(7), 3)).residue() == 5);
  CHECK(invert(Scalar::one(Q)).is_one());
  try {
    invert(Scalar(Q));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
}

TEST_CASE("sample_scalar contracts") {
  Rng a(42), b(42);
  for (int i = 0; i < 200; ++i) {
    Scalar s = sample_scalar(FieldId::prime(5), 3, a);
    CHECK(s.residue() < 5);
    CHECK(s == sample_scalar(FieldId::prime(5), 3, b));
  }
  Rng c(7);
  for (int i = 0; i < 200; ++i) {
    Scalar s = sample_scalar(FieldId::rationals(), 1, c);
    CHECK(s.rational().get_den() == 1);
    CHECK(abs(s.rational().get_num()) <= 1);
  }
}

TEST_CASE("scalar parse round trip") {
  for (auto f : {FieldId::rationals(), FieldId::prime(101)}) {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      Scalar s = sample_scalar(f, 1000, rng);
      CHECK(Scalar::parse(f, s.to_string()) == s);
    }
  }
  CHECK(Scalar::parse(FieldId::rationals(), "6/-4") == make_scalar(FieldId::rationals(), -3, 2));
  CHECK(Scalar::parse(FieldId::prime(7), "10").residue() == 3);
}

TEST_CASE("field axioms on random triples") {
  for (auto f : {FieldId::rationals(), FieldId::prime(101), FieldId::prime(65537)}) {
    Rng rng(Rng::derive(11, f.modulus()));
    for (int t = 0; t < 10000; ++t) {
      Scalar a = sample_scalar(f, 10, rng), b = sample_scalar(f, 10, rng), c = sample_scalar(f, 10, rng);
      REQUIRE((a + b) + c == a + (b + c));
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE(a + (-a) == Scalar::zero(f));
      if (!a.is_zero()) REQUIRE((a * a.inverse()).is_one());
      if (f.is_rationals()) {
        const mpq_class r = (a * b + c).rational();
        REQUIRE(gcd(r.get_num(), r.get_den()) == 1);
        REQUIRE(r.get_den() > 0);
      }
    }
  }
}

TEST_CASE("reduction mod p commutes with arithmetic") {
  const auto Q = FieldId::rationals();
  const auto P = FieldId::prime(101);
  Rng rng(5);
  for (int t = 0; t < 2000; ++t) {
    Scalar a = sample_scalar(Q, 10, rng), b = sample_scalar(Q, 10, rng);
    Scalar r = a * b + a - b;
    REQUIRE(r.reduce_to(P) == a.reduce_to(P) * b.reduce_to(P) + a.reduce_to(P) - b.reduce_to(P));
  }
  CHECK_THROWS_AS(make_scalar(Q, 1, 101).reduce_to(P), Error);
}

TEST_CASE("derived seeds are distinct and stable") {
  CHECK(Rng::derive(1, 0) != Rng::derive(1, 1));
  CHECK(Rng::derive(1, 0) == Rng::derive(1, 0));
  CHECK(Rng::derive(1, 2) != Rng::derive(2, 1));
}

TEST_CASE("matrix rank, nullspace, determinant") {
  const auto Q = FieldId::rationals();
  ScalarMatrix m(3, 3, Q);
  long vals[3][3] = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = q(vals[i][j]);
  CHECK(rank(m) == 2);
  CHECK(determinant(m).is_zero());
  auto ns = nullspace(m);
  REQUIRE(ns.size() == 1);
  for (auto x : m.apply(ns[0])) CHECK(x.is_zero());
  m(2, 2) = q(10);
  CHECK(determinant(m) == q(-3));
  auto x = solve(m, {q(1), q(0), q(0)});
  CHECK(m.apply(x) == std::vector<Scalar>{q(1), q(0), q(0)});
  auto sel = select_pivots(m);
  CHECK(sel.rows.size() == 3);
}

TEST_CASE("select_pivots gives a nonsingular block of full rank") {
  const auto P = FieldId::prime(101);
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = rng.uniform(1, 5), c = rng.uniform(1, 5), k = rng.uniform(0, 3);
    // Product of r x k and k x c matrices has rank <= k.
    ScalarMatrix a(r, k, P), b(k, c, P);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < k; ++j) a(i, j) = sample_scalar(P, 1, rng);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < c; ++j) b(i, j) = sample_scalar(P, 1, rng);
    ScalarMatrix m = k == 0 ? ScalarMatrix(r, c, P) : a * b;
    auto sel = select_pivots(m);
    CHECK(sel.rows.size() == rank(m));
    CHECK(sel.cols.size() == rank(m));
    if (!sel.rows.empty()) CHECK(!determinant(m.submatrix(sel.rows, sel.cols)).is_zero());
  }
}
