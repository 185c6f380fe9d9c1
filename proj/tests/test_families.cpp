#include <chrono>

#include "doctest.h"
#include "test_util.hpp"

#include "mlv/error.hpp"
#include "mlv/families.hpp"

using namespace mlvtest;

namespace {
const FieldId Q = FieldId::rationals();

ScalarMatrix mat(const std::vector<std::vector<long>>& rows) {
  ScalarMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), Q);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = q(rows[i][j]);
  return m;
}

ScalarMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng, int h = 5) {
  ScalarMatrix m(r, c, Q);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = sample_scalar(Q, h, rng);
  return m;
}

bool is_kernel(const ScalarMatrix& m, const std::vector<Scalar>& v) {
  for (const auto& c : m.apply(v))
    if (!c.is_zero()) return false;
  return true;
}

/// f = x * y on blocks of size 1.
Tensor xy() {
  Tensor t(Q, VarBlocks({1, 1}), 1);
  t.set(std::vector<std::size_t>{1, 1}, 0, q(1));
  return t;
}

BlockPoint pt(const std::vector<std::vector<long>>& blocks) {
  BlockPoint p;
  for (const auto& b : blocks) {
    p.emplace_back();
    for (long c : b) p.back().push_back(q(c));
  }
  return p;
}

}  // namespace

TEST_CASE("psi_chart_solve examples") {
  const auto m = mat({{1, 2}, {3, 6}});
  const FixedRankChart chart{{0}, {0}};
  const auto v = psi_chart_solve(m, {q(1)}, chart);
  CHECK(v == std::vector<Scalar>{q(-2), q(1)});
  CHECK(is_kernel(m, v));

  const auto w = std::vector<Scalar>{q(3), q(-4)};
  CHECK(psi_chart_solve(ScalarMatrix(2, 2, Q), w, FixedRankChart{}) == w);

  CHECK_THROWS_AS(psi_chart_solve(mat({{0, 1}, {0, 2}}), {q(1)}, chart), Error);
  try {
    psi_chart_solve(mat({{0, 1}, {0, 2}}), {q(1)}, chart);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularPivot);
  }

  const auto proj = phi_project(m, v, chart);
  CHECK(proj.matrix == m);
  CHECK(proj.free == std::vector<Scalar>{q(1)});
  CHECK(psi_chart_solve(proj.matrix, proj.free, chart) == v);
}

TEST_CASE("fixed-rank charts on random factorized matrices") {
  Rng rng(11);
  int done = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t rows = static_cast<std::size_t>(rng.uniform(1, 4));
    const std::size_t cols = static_cast<std::size_t>(rng.uniform(1, 4));
    const std::size_t r = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(std::min(rows, cols))));
    const ScalarMatrix m = random_matrix(rows, r, rng) * random_matrix(r, cols, rng);
    const auto piv = select_pivots(m);
    const FixedRankChart chart{piv.rows, piv.cols};
    REQUIRE(chart.r() == rank(m));
    std::vector<Scalar> w;
    for (std::size_t k = 0; k < cols - chart.r(); ++k) w.push_back(sample_scalar(Q, 9, rng));
    const auto v = psi_chart_solve(m, w, chart);
    CHECK(is_kernel(m, v));
    // phi after psi is the identity on (M, w).
    const auto proj = phi_project(m, v, chart);
    CHECK(proj.matrix == m);
    CHECK(proj.free == w);
    // psi after phi is the identity on kernel vectors.
    std::vector<Scalar> kv(cols, Scalar::zero(Q));
    for (const auto& b : nullspace(m)) {
      const Scalar c = sample_scalar(Q, 7, rng);
      for (std::size_t k = 0; k < cols; ++k) kv[k] += c * b[k];
    }
    const auto back = phi_project(m, kv, chart);
    CHECK(psi_chart_solve(back.matrix, back.free, chart) == kv);
    ++done;
  }
  CHECK(done == 1000);
}

TEST_CASE("shifted_system on x*y at (0, 5)") {
  const auto s = shifted_system(xy(), pt({{0}, {5}}), {q(0)});
  const VarBlocks b({1, 1});
  const auto x = var(Q, b, 0), y = var(Q, b, 1);
  CHECK(s.function(0, 0b00) == q(5) * x + x * y);
  CHECK(s.function(0, 0b01).is_zero());
  CHECK(s.function(0, 0b10) == q(5) * x);
  CHECK(s.function(0, 0b11).is_zero());
  CHECK(s.stage_class == std::vector<std::size_t>{2, 0, 1, 0});
  const std::vector<Scalar> origin{q(0), q(0)};
  for (const auto& g : s.functions) CHECK(g.evaluate(origin).is_zero());

  auto z = shifted_system(xy(), pt({{0}, {0}}), {q(0)});
  CHECK(z.function(0, 0b11).is_zero());

  try {
    shifted_system(xy(), pt({{1}, {1}}), {q(0)});
    FAIL("expected NotASolution");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotASolution);
  }
}

TEST_CASE("shifted functions are closed under fixing one more block") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    auto f = gen_random(Q, VarBlocks({2, 2, 2}), 2, Rng::derive(3, t), 0.6);
    const auto v = random_rational_solution(f, rng);
    const auto s = shifted_system(f, v, std::vector<Scalar>(2, q(0)));
    const auto flat_zero = std::vector<Scalar>(6, q(0));
    for (std::size_t j = 0; j < 2; ++j)
      for (std::uint32_t mask = 0; mask < 8; ++mask)
        for (std::size_t i = 0; i < 3; ++i) {
          if (mask >> i & 1u) continue;
          // Setting x_i = 0 in f_{j,I} gives f_{j, I + i}.
          const auto& g = s.function(j, mask);
          std::vector<MultiPoly> images;
          const VarBlocks& b = f.blocks();
          for (std::size_t u = 0; u < b.total(); ++u)
            images.push_back(b.block_of(u) == i ? MultiPoly(Q, b) : var(Q, b, u));
          CHECK(compose(g, images) == s.function(j, mask | (1u << i)));
        }
  }
}

TEST_CASE("build_family on x*y") {
  Rng rng(1);
  const auto s = shifted_system(xy(), pt({{0}, {5}}), {q(0)});
  const auto w = build_family(s, rng);
  CHECK(w.parameter_dim == 1);
  CHECK(w.stages[0].chart.r() == 1);
  CHECK(w.stages[1].chart.r() == 0);
  CHECK(family_eval(w, {q(2)}) == pt({{0}, {7}}));
  CHECK(family_eval(w, {q(0)}) == s.v);
  CHECK(family_jacobian_rank(w, {q(3)}) == 1);
  const auto cert = certify_family(w, s, 20, rng);
  CHECK(cert.verdict);
  CHECK(cert.jac_rank == 1);
  CHECK(cert.codim_bound == 4);
  CHECK(cert.base_point_method == "eval");
  CHECK_FALSE(cert.irreducibility_checked);
}

TEST_CASE("zero system gives the whole space") {
  Rng rng(2);
  const Tensor z(Q, VarBlocks({2, 3}), 2);
  const auto s = shifted_system(z, pt({{1, 2}, {0, 4, 1}}), {q(0), q(0)});
  const auto w = build_family(s, rng);
  CHECK(w.parameter_dim == 5);
  const std::vector<Scalar> p{q(1), q(2), q(3), q(4), q(5)};
  CHECK(family_eval(w, p) == pt({{2, 4}, {3, 8, 6}}));
  CHECK(family_jacobian_rank(w, p) == 5);
}

TEST_CASE("constant family has Jacobian rank 0") {
  Rng rng(4);
  // x*y with both blocks forced to zero by the linear stage functions.
  const auto s = shifted_system(xy(), pt({{1}, {1}}), {q(1)});
  const auto w = build_family(s, rng);
  CHECK(w.parameter_dim == 0);
  CHECK(family_jacobian_rank(w, {}) == 0);
  CHECK(family_eval(w, {}) == s.v);
}

TEST_CASE("quaternion family through (q, 0)") {
  Rng rng(5);
  const auto t = gen_quaternion(Q, q(-1), q(-1));
  const auto v = pt({{1, 2, -1, 3}, {0, 0, 0, 0}});
  const auto s = shifted_system(t, v, std::vector<Scalar>(4, q(0)));
  const auto w = build_family(s, rng);
  CHECK(w.parameter_dim == 4);
  CHECK(w.stages[1].chart.r() == 4);
  for (int k = 0; k < 5; ++k) {
    const auto p = sample_family_params(w, rng);
    const auto x = family_eval(w, p);
    for (const auto& c : eval_tensor(t, x)) CHECK(c.is_zero());
    for (const auto& c : x[1]) CHECK(c.is_zero());
  }
  const auto cert = certify_family(w, s, 10, rng);
  CHECK(cert.verdict);
  CHECK(cert.jac_rank == 4);
  CHECK(cert.ambient_dim == 8);
}

TEST_CASE("pivot denominators and the cone base point") {
  Rng rng(6);
  // x0 y0 - x1 y1: the stage-2 matrix (x0, -x1) vanishes at the origin.
  Tensor t(Q, VarBlocks({2, 2}), 1);
  t.set(std::vector<std::size_t>{1, 1}, 0, q(1));
  t.set(std::vector<std::size_t>{2, 2}, 0, q(-1));
  const auto s = shifted_system(t, pt({{0, 0}, {0, 0}}), {q(0)});
  const auto w = build_family(s, rng);
  CHECK(w.parameter_dim == 3);
  CHECK(w.stages[1].chart.r() == 1);
  CHECK_FALSE(w.stages[1].denominator.is_constant());
  std::vector<Scalar> zero(3, q(0));
  try {
    family_eval(w, zero);
    FAIL("expected PivotDenominatorZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PivotDenominatorZero);
  }
  const auto cert = certify_family(w, s, 10, rng);
  CHECK(cert.base_point_method == "cone");
  CHECK(cert.verdict);
  CHECK(cert.jac_rank == 3);
  // The stored sample keeps the stage-2 pivot minor nonzero.
  const auto& st = w.stages[1];
  std::vector<Scalar> sample = st.sample_params;
  sample.push_back(q(1));
  auto x = flatten_point(family_eval_shifted(w, sample));
  x.resize(8, q(0));
  CHECK_FALSE(st.pivot_minor.evaluate(x).is_zero());
}

TEST_CASE("finite fields are rejected") {
  Rng rng(7);
  const FieldId F = FieldId::prime(101);
  Tensor t(F, VarBlocks({1, 1}), 1);
  const auto s = shifted_system(t, BlockPoint{{fp(0, 101)}, {fp(0, 101)}}, {fp(0, 101)});
  try {
    build_family(s, rng);
    FAIL("expected FiniteFieldUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FiniteFieldUnsupported);
  }
}

TEST_CASE("families through random rational solutions") {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(99);
  int injective = 0;
  const int trials = 12;
  for (int t = 0; t < trials; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 2);
    std::vector<std::size_t> shape(d);
    for (auto& n : shape) n = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t m = static_cast<std::size_t>(rng.uniform(1, 2));
    const auto f = gen_random(Q, VarBlocks(shape), m, Rng::derive(99, t), 0.7);
    BlockPoint v;
    std::vector<Scalar> c;
    if (t % 3 == 0) {
      for (auto n : shape) v.push_back(random_point(Q, n, rng, 3));
      c = eval_tensor(f, v);
    } else {
      v = random_rational_solution(f, rng);
      c.assign(m, q(0));
    }
    const auto s = shifted_system(f, v, c);
    const auto w = build_family(s, rng);
    std::size_t nsum = 0, rsum = 0;
    for (std::size_t b = 0; b < d; ++b) {
      nsum += shape[b];
      rsum += w.stages[b].chart.r();
    }
    CHECK(w.parameter_dim == nsum - rsum);
    CHECK(static_cast<long>(w.parameter_dim) >= static_cast<long>(nsum) - static_cast<long>(m << d));
    const auto cert = certify_family(w, s, 5, rng);
    CHECK(cert.verdict);
    CHECK(cert.jac_rank <= w.parameter_dim);
    if (cert.jac_rank == w.parameter_dim) ++injective;
    for (int k = 0; k < 3; ++k) {
      const auto x = family_eval(w, sample_family_params(w, rng));
      CHECK(eval_tensor(f, x) == c);
    }
    const auto rep = check_certificate(certificate_to_json(s, w, cert));
    CHECK(rep.ok);
  }
  MESSAGE("injective families: " << injective << "/" << trials);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));
}

TEST_CASE("certificate checker rejects tampering") {
  Rng rng(8);
  const auto t = gen_quaternion(Q, q(-1), q(-1));
  const auto s = shifted_system(t, pt({{1, 0, 2, 0}, {0, 0, 0, 0}}), std::vector<Scalar>(4, q(0)));
  const auto w = build_family(s, rng);
  const auto cert = certify_family(w, s, 5, rng);
  const auto j = certificate_to_json(s, w, cert);
  const auto good = check_certificate(j);
  CHECK(good.ok);
  CHECK(good.jac_rank == 4);

  auto bad_rank = j;
  bad_rank["checks"]["jac_rank"] = 6;
  CHECK_FALSE(check_certificate(bad_rank).ok);

  auto bad_sample = j;
  bad_sample["checks"]["vanishing"][0]["point"][0] = "12345";
  CHECK_FALSE(check_certificate(bad_sample).ok);

  auto bad_point = j;
  bad_point["v"][1][0] = "1";
  CHECK_FALSE(check_certificate(bad_point).ok);

  // x0 y0 - x1 y1: both the tensor and the solved formulas matter here.
  Tensor h(Q, VarBlocks({2, 2}), 1);
  h.set(std::vector<std::size_t>{1, 1}, 0, q(1));
  h.set(std::vector<std::size_t>{2, 2}, 0, q(-1));
  const auto hs = shifted_system(h, pt({{0, 0}, {0, 0}}), {q(0)});
  const auto hw = build_family(hs, rng);
  const auto hj = certificate_to_json(hs, hw, certify_family(hw, hs, 5, rng));
  CHECK(check_certificate(hj).ok);

  auto bad_tensor = hj;
  bad_tensor["tensor"]["entries"][0]["coef"] = "7";
  CHECK_FALSE(check_certificate(bad_tensor).ok);

  auto bad_formula = hj;
  auto& nums = bad_formula["family"]["stages"][1]["numerators"];
  for (auto& n : nums)
    if (!n["terms"].empty()) {
      n["terms"][0]["coef"] = "5";
      break;
    }
  CHECK_FALSE(check_certificate(bad_formula).ok);

  auto bad_verdict = j;
  bad_verdict["checks"]["codim_bound"] = 3;
  CHECK_FALSE(check_certificate(bad_verdict).ok);

  auto malformed = j;
  malformed.erase("family");
  try {
    check_certificate(malformed);
    FAIL("expected MalformedCert");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedCert);
  }
}
