#include "doctest.h"
#include "test_util.hpp"

#include "mlv/error.hpp"
#include "mlv/invariants.hpp"

using namespace mlvtest;

namespace {
const FieldId Q = FieldId::rationals();

/// Pascal's triangle row d, entry k.
long pascal(unsigned d, unsigned k) {
  std::vector<long> row{1};
  for (unsigned i = 0; i < d; ++i) {
    std::vector<long> next(row.size() + 1, 1);
    for (std::size_t j = 1; j < row.size(); ++j) next[j] = row[j - 1] + row[j];
    row = next;
  }
  return row[k];
}

long pow_sq(long base, unsigned e) {
  long acc = 1;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

Tensor matrix_form(const std::vector<std::vector<long>>& a) {
  Tensor t(Q, VarBlocks({a.size(), a[0].size()}), 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j]) t.set(std::vector<std::size_t>{i + 1, j + 1}, 0, Scalar(Q, a[i][j]));
  return t;
}
}  // namespace

TEST_CASE("geometric rank examples") {
  CHECK(geometric_rank(gen_matmul_form(Q, 2)).lo == 3);
  for (std::size_t r = 1; r <= 3; ++r) {
    const auto rep = geometric_rank(gen_diag(Q, 3, r, 3), std::nullopt, true);
    CHECK(rep.exact());
    CHECK(rep.lo == static_cast<long>(r));
  }
  CHECK(geometric_rank(matrix_form({{1, 2, 3}, {2, 4, 6}, {0, 1, 0}})).lo == 2);
  CHECK(geometric_rank(matrix_form({{0, 0}, {0, 0}})).lo == 0);
  CHECK(geometric_rank(gen_quaternion(Q, q(-1), q(-1))).lo == 3);
}

TEST_CASE("analytic rank intervals") {
  const auto quat = analytic_rank_bounds(gen_quaternion(Q, q(-1), q(-1)));
  CHECK(quat.lo == 3);
  CHECK(quat.hi == 4);
  for (std::size_t r = 1; r <= 3; ++r) {
    const auto rep = analytic_rank_bounds(gen_diag(Q, 3, r, r + 1));
    CHECK(rep.lo == static_cast<long>(r));
    CHECK(rep.hi == static_cast<long>(r));
  }
  const auto m = analytic_rank_bounds(matrix_form({{1, 2, 3}, {2, 4, 6}, {0, 1, 0}}));
  CHECK(m.lo == 2);
  CHECK(m.hi == 2);
  CHECK_THROWS_AS(analytic_rank_bounds(gen_diag(FieldId::prime(101), 3, 1, 2)), Error);
}

TEST_CASE("birch rank examples") {
  const VarBlocks b4 = VarBlocks::single(4);
  const auto p = var(Q, b4, 0) * var(Q, b4, 1) + var(Q, b4, 2) * var(Q, b4, 3);
  CHECK(birch_rank({p}).lo == 4);
  const VarBlocks b1 = VarBlocks::single(1);
  CHECK(birch_rank({var(Q, b1, 0) * var(Q, b1, 0)}).lo == 1);
  const auto pair = collective_birch({var(Q, b4, 0) * var(Q, b4, 1), var(Q, b4, 2) * var(Q, b4, 3)});
  CHECK(pair.lo == 2);
  CHECK(pair.name == InvariantName::CollectiveBrk);
  try {
    birch_rank({var(Q, b1, 0) * var(Q, b1, 0), cst(Q, b1, 0) + var(Q, b1, 0) * var(Q, b1, 0) * cst(Q, b1, 2)});
    FAIL("expected TooManyPolynomials");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyPolynomials);
  }
}

TEST_CASE("partition rank intervals") {
  const auto mm = partition_rank_bounds(gen_matmul_form(Q, 2));
  CHECK(mm.lo == 3);
  CHECK(mm.hi == 4);
  const auto dg = partition_rank_bounds(gen_diag(Q, 4, 2, 3));
  CHECK(dg.exact());
  CHECK(dg.lo == 2);
  CHECK(partition_rank_bounds(matrix_form({{1, 0}, {0, 1}})).lo == 2);
}

TEST_CASE("strength intervals") {
  const VarBlocks b4 = VarBlocks::single(4);
  const auto p = var(Q, b4, 0) * var(Q, b4, 1) + var(Q, b4, 2) * var(Q, b4, 3);
  const auto s = strength_bounds(p);
  CHECK(s.lo <= 2);
  CHECK(s.hi >= 2);
  CHECK(s.lo == 2);
  const VarBlocks b2 = VarBlocks::single(2);
  const auto cubic = strength_bounds(var(Q, b2, 0) * var(Q, b2, 0) * var(Q, b2, 1));
  CHECK(cubic.lo <= 1);
  CHECK(cubic.hi >= 1);

  const auto cs = collective_strength_bounds({var(Q, b4, 0) * var(Q, b4, 1), var(Q, b4, 2) * var(Q, b4, 3)});
  CHECK(cs.lo <= 1);
  CHECK(cs.hi >= 1);
  const auto single = collective_strength_bounds({p});
  CHECK(single.lo == s.lo);
  CHECK(single.hi == s.hi);
}

TEST_CASE("random cubic strength interval is valid") {
  Rng rng(3);
  const VarBlocks b = VarBlocks::single(4);
  for (int t = 0; t < 3; ++t) {
    std::vector<Term> ts;
    for (int k = 0; k < 5; ++k) {
      Monomial m(4);
      for (int e = 0; e < 3; ++e) {
        const auto v = static_cast<std::size_t>(rng.uniform(0, 3));
        m.set(v, m[v] + 1);
      }
      ts.push_back({m, Scalar(Q, rng.uniform(1, 5))});
    }
    const auto s = strength_bounds(MultiPoly::from_terms(Q, b, ts));
    CHECK(s.lo >= 1);
    CHECK(s.lo <= s.hi);
  }
}

TEST_CASE("constants match independent recomputation") {
  const auto t3 = theorem_constants(3, 1);
  CHECK(t3.c_pvsa == 3);
  CHECK(t3.c_akz == 18);
  CHECK(t3.c_pvsg == 54);
  CHECK(t3.c_polar == 3);
  CHECK(t3.c_krull == 8);
  CHECK(theorem_constants(2, 1).c_pvsa == 1);
  const auto t42 = theorem_constants(4, 2);
  CHECK(t42.c_collective == 1512);
  CHECK(t42.c_krull == 32);
  for (unsigned d = 2; d <= 6; ++d)
    for (unsigned m = 1; m <= 3; ++m) {
      const auto t = theorem_constants(d, m);
      const long a = pow_sq(2, d - 1) - 1;
      const long b = pascal(d, d / 2);
      CHECK(t.c_pvsa == a);
      CHECK(t.c_akz == 6 * a);
      CHECK(t.c_pvsg == 6 * a * a);
      CHECK(t.c_polar == b);
      CHECK(t.c_strstab == 6 * a * b);
      CHECK(t.c_strbirch == 6 * a * b * (d - 1));
      CHECK(t.c_collective == 6 * a * b * (d - 1) * m);
      CHECK(t.c_krull == pow_sq(2, d) * m);
    }
  CHECK_THROWS_AS(theorem_constants(1, 1), Error);
  CHECK(constants_to_json(t3)["c_pvsg"] == 54);
}

TEST_CASE("report JSON is deterministic and excludes timings") {
  auto r = geometric_rank(gen_diag(Q, 3, 2, 2));
  r.timings["seconds"] = 1.5;
  const auto j = report_to_json(r);
  CHECK(j["lo"] == 2);
  CHECK(j["exact"] == true);
  CHECK_FALSE(j.contains("timings"));
  CHECK(report_to_json(geometric_rank(gen_diag(Q, 3, 2, 2))).dump() == j.dump());
}

TEST_CASE("every suite passes a short run and rejects its control") {
  for (const auto& name : suite_names()) {
    SuiteOptions o;
    o.name = name;
    o.trials = name == "fixed-rank" ? 50 : 3;
    o.seed = 11;
    const auto rep = run_suite(o);
    INFO(suite_to_json(rep).dump());
    CHECK(rep.trials.size() == o.trials);
    CHECK(rep.failed() == 0);
    CHECK(rep.control_rejected);
    CHECK(rep.ok());
  }
  CHECK(suite_names().size() == 11);
}

TEST_CASE("only-trial reproduces a single trial") {
  SuiteOptions o;
  o.name = "additivity";
  o.trials = 4;
  o.seed = 5;
  const auto full = run_suite(o);
  o.only_trial = 2;
  const auto one = run_suite(o);
  REQUIRE(one.trials.size() == 1);
  CHECK(one.trials[0].seed == full.trials[2].seed);
  CHECK(one.trials[0].detail == full.trials[2].detail);
  CHECK(one.trials[0].repro.find("--only-trial 2") != std::string::npos);
}

TEST_CASE("unknown suite") {
  SuiteOptions o;
  o.name = "nope";
  try {
    run_suite(o);
    FAIL("expected UnknownSuite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownSuite);
  }
}
