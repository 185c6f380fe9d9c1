#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "mlv/error.hpp"
#include "mlv/families.hpp"
#include "mlv/invariants.hpp"
#include "mlv/strata.hpp"

namespace mlv {

std::size_t SuiteReport::passed() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const TrialResult& t) { return t.pass; }));
}

std::size_t SuiteReport::failed() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const TrialResult& t) { return !t.pass && !t.skipped; }));
}

namespace {

const FieldId kQ = FieldId::rationals();
const FieldId kF101 = FieldId::prime(101);

struct Outcome {
  bool pass = false;
  nlohmann::json detail = nlohmann::json::object();
};

struct Ctx {
  const SuiteOptions& opts;
  Rng& rng;
  std::uint64_t seed;

  FieldId field(FieldId def) const { return opts.field.value_or(def); }
  std::vector<std::size_t> bounds(std::vector<std::size_t> def) const {
    auto b = opts.shape.empty() ? def : opts.shape;
    if (opts.d) b.resize(*opts.d, b.empty() ? 2 : b.back());
    return b;
  }
  VarBlocks random_shape(const std::vector<std::size_t>& b) {
    std::vector<std::size_t> s;
    for (auto n : b) s.push_back(static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(std::max<std::size_t>(n, 1)))));
    return VarBlocks(s);
  }
  double density() { return 0.4 + 0.1 * static_cast<double>(rng.uniform(0, 5)); }
  std::uint64_t sub_seed(std::uint64_t k) { return Rng::derive(seed, k); }
};

using TrialFn = std::function<Outcome(Ctx&)>;
using ControlFn = std::function<bool()>;  // true when the falsified fixture is rejected

struct Suite {
  TrialFn trial;
  std::string control;
  ControlFn rejects;
};

nlohmann::json shape_json(const VarBlocks& b) { return b.sizes(); }

/// diag(d, r, n) written over `field`.
Tensor diag(FieldId field, std::size_t d, std::size_t r, std::size_t n) { return gen_diag(field, d, r, n); }

ScalarMatrix random_matrix(FieldId f, std::size_t r, std::size_t c, Rng& rng) {
  ScalarMatrix m(r, c, f);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Scalar(f, static_cast<long>(rng.uniform(-4, 4)));
  return m;
}

long gr(const Tensor& f) { return geometric_rank(f).lo; }

// codim-formula ------------------------------------------------------------

bool codim_claim_holds(const Tensor& f, long claimed) {
  const auto rep = codim_by_stratification(f);
  return rep.total_codim == claimed && rep.direct_codim == claimed;
}

Suite codim_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    const auto shape = c.random_shape(c.bounds({3, 3, 3}));
    const std::size_t m = static_cast<std::size_t>(c.rng.uniform(1, static_cast<std::int64_t>(c.opts.m.value_or(3))));
    const auto f = gen_random(c.field(kF101), shape, m, c.sub_seed(1), c.density());
    const auto rep = verify_codim_formula(f);
    Outcome o;
    o.pass = rep.agree;
    o.detail = {{"shape", shape_json(shape)}, {"m", m}, {"stratified", rep.total_codim}, {"direct", rep.direct_codim}};
    if (!rep.agree) o.detail["diagnostics"] = rep.diagnostics;
    return o;
  };
  s.control = "slice system of diag(3,2,2) claimed to have codimension 3";
  s.rejects = [] { return !codim_claim_holds(slice_system(diag(kF101, 3, 2, 2), 2), 3); };
  return s;
}

// fixed-rank -----------------------------------------------------------------

bool chart_roundtrip(const ScalarMatrix& m, const FixedRankChart& chart, const std::vector<Scalar>& w,
                     const std::vector<Scalar>& kernel) {
  const auto v = psi_chart_solve(m, w, chart);
  for (const auto& x : m.apply(v))
    if (!x.is_zero()) return false;
  const auto proj = phi_project(m, v, chart);
  if (!(proj.matrix == m) || proj.free != w) return false;
  const auto back = phi_project(m, kernel, chart);
  return psi_chart_solve(back.matrix, back.free, chart) == kernel;
}

Outcome fixed_rank_pair(FieldId f, Rng& rng) {
  const std::size_t rows = static_cast<std::size_t>(rng.uniform(1, 4));
  const std::size_t cols = static_cast<std::size_t>(rng.uniform(1, 4));
  const std::size_t r = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(std::min(rows, cols))));
  const ScalarMatrix m = random_matrix(f, rows, r, rng) * random_matrix(f, r, cols, rng);
  const auto piv = select_pivots(m);
  const FixedRankChart chart{piv.rows, piv.cols};
  std::vector<Scalar> w;
  for (std::size_t k = chart.r(); k < cols; ++k) w.push_back(sample_scalar(f, 9, rng));
  std::vector<Scalar> kernel(cols, Scalar::zero(f));
  for (const auto& b : nullspace(m)) {
    const Scalar c = sample_scalar(f, 7, rng);
    for (std::size_t k = 0; k < cols; ++k) kernel[k] += c * b[k];
  }
  Outcome o;
  o.pass = chart_roundtrip(m, chart, w, kernel);
  o.detail = {{"field", f.to_string()}, {"rows", rows}, {"cols", cols}, {"rank", chart.r()}};
  return o;
}

Suite fixed_rank_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    if (c.opts.field) return fixed_rank_pair(*c.opts.field, c.rng);
    auto a = fixed_rank_pair(kQ, c.rng);
    auto b = fixed_rank_pair(kF101, c.rng);
    Outcome o;
    o.pass = a.pass && b.pass;
    o.detail = {{"Q", a.detail}, {"F:101", b.detail}};
    return o;
  };
  s.control = "vector (1, 1) outside the kernel of [[1, 2], [3, 6]] passed off as chart-compatible";
  s.rejects = [] {
    ScalarMatrix m(2, 2, kQ);
    m(0, 0) = Scalar(kQ, 1);
    m(0, 1) = Scalar(kQ, 2);
    m(1, 0) = Scalar(kQ, 3);
    m(1, 1) = Scalar(kQ, 6);
    return !chart_roundtrip(m, FixedRankChart{{0}, {0}}, {Scalar(kQ, 1)}, {Scalar(kQ, 1), Scalar(kQ, 1)});
  };
  return s;
}

// krull -----------------------------------------------------------------------

Suite krull_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    const std::size_t d = c.opts.d.value_or(3);
    std::vector<std::size_t> b = c.opts.shape.empty() ? std::vector<std::size_t>(d, 4) : c.opts.shape;
    b.resize(d, b.empty() ? 4 : b.back());
    const auto shape = c.random_shape(b);
    const std::size_t mmax = c.opts.m.value_or(2);
    const std::size_t m = static_cast<std::size_t>(c.rng.uniform(1, static_cast<std::int64_t>(mmax)));
    const auto f = gen_random(c.field(kQ), shape, m, c.sub_seed(1), c.density());
    const auto v = random_rational_solution(f, c.rng);
    const auto sys = shifted_system(f, v, std::vector<Scalar>(m, Scalar::zero(f.field())));
    const auto w = build_family(sys, c.rng);
    const auto cert = certify_family(w, sys, 20, c.rng);
    const auto check = check_certificate(certificate_to_json(sys, w, cert));
    const long need = static_cast<long>(shape.total()) - static_cast<long>(m << d);
    Outcome o;
    o.pass = cert.verdict && check.ok && static_cast<long>(cert.jac_rank) >= need;
    o.detail = {{"shape", shape_json(shape)},       {"m", m},
                {"parameter_dim", w.parameter_dim}, {"jac_rank", cert.jac_rank},
                {"bound", need},                    {"verdict", cert.verdict},
                {"checker", check.ok},              {"base_point_method", cert.base_point_method}};
    if (!check.ok) o.detail["checker_failures"] = check.failures;
    return o;
  };
  s.control = "x*y family certificate with a tampered sample point";
  s.rejects = [] {
    Tensor t(kQ, VarBlocks({1, 1}), 1);
    t.set(std::vector<std::size_t>{1, 1}, 0, Scalar(kQ, 1));
    Rng rng(17);
    const auto sys = shifted_system(t, BlockPoint{{Scalar(kQ, 0)}, {Scalar(kQ, 5)}}, {Scalar(kQ, 0)});
    const auto w = build_family(sys, rng);
    auto j = certificate_to_json(sys, w, certify_family(w, sys, 3, rng));
    j["checks"]["vanishing"][0]["point"][0] = "1";
    return !check_certificate(j).ok;
  };
  return s;
}

// slicing, additivity, monotonicity, subadditivity ----------------------------

Suite slicing_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    auto b = c.bounds({2, 3, 4});
    const auto f = gen_random(c.field(kQ), VarBlocks(b), 1, c.sub_seed(1), c.density());
    std::vector<long> per;
    for (std::size_t j = 0; j < f.num_blocks(); ++j) per.push_back(geometric_rank(f, j).lo);
    Outcome o;
    o.pass = std::adjacent_find(per.begin(), per.end(), std::not_equal_to<>()) == per.end();
    o.detail = {{"shape", b}, {"per_block", per}};
    return o;
  };
  s.control = "diag(3,2,3) with block 0 claimed to slice to GR 3";
  s.rejects = [] {
    const auto f = diag(kQ, 3, 2, 3);
    return geometric_rank(f, 0).lo != 3 || geometric_rank(f, 2).lo != 3;
  };
  return s;
}

Suite additivity_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    const auto b = c.bounds({2, 2, 2});
    const auto f = gen_random(c.field(kQ), c.random_shape(b), 1, c.sub_seed(1), c.density());
    const auto g = gen_random(c.field(kQ), c.random_shape(b), 1, c.sub_seed(2), c.density());
    const long a = gr(f), bb = gr(g), sum = gr(direct_sum(f, g));
    Outcome o;
    o.pass = sum == a + bb;
    o.detail = {{"gr_f", a}, {"gr_g", bb}, {"gr_sum", sum}};
    return o;
  };
  s.control = "diag(3,1,2) + diag(3,2,2) claimed to have GR 4";
  s.rejects = [] { return gr(direct_sum(diag(kQ, 3, 1, 2), diag(kQ, 3, 2, 2))) != 4; };
  return s;
}

Suite monotonicity_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    const auto b = c.bounds({3, 3, 2});
    const auto g = gen_random(c.field(kQ), VarBlocks(b), 1, c.sub_seed(1), c.density());
    std::vector<ScalarMatrix> maps;
    std::vector<std::size_t> target;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t k = static_cast<std::size_t>(c.rng.uniform(1, static_cast<std::int64_t>(b[j])));
      target.push_back(k);
      maps.push_back(random_matrix(g.field(), b[j], k, c.rng));
    }
    const auto f = restrict_tensor(g, maps);
    const long lf = gr(f), lg = gr(g);
    Outcome o;
    o.pass = lf <= lg;
    o.detail = {{"shape", b}, {"target", target}, {"gr_restricted", lf}, {"gr_original", lg}};
    return o;
  };
  s.control = "diag(3,2,2) claimed to be at most its restriction by zero maps";
  s.rejects = [] {
    const auto g = diag(kQ, 3, 2, 2);
    std::vector<ScalarMatrix> zero(3, ScalarMatrix(2, 2, kQ));
    return !(gr(g) <= gr(restrict_tensor(g, zero)));
  };
  return s;
}

Suite subadditivity_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    const auto shape = c.random_shape(c.bounds({2, 2, 3}));
    const auto f = gen_random(c.field(kQ), shape, 1, c.sub_seed(1), c.density());
    const auto g = gen_random(c.field(kQ), shape, 1, c.sub_seed(2), c.density());
    const long a = gr(f), b = gr(g), sum = gr(f + g);
    Outcome o;
    o.pass = sum <= a + b;
    o.detail = {{"shape", shape_json(shape)}, {"gr_f", a}, {"gr_g", b}, {"gr_f_plus_g", sum}};
    return o;
  };
  s.control = "two disjoint rank-one diagonals claimed to satisfy GR(f + g) <= GR(f) + GR(g) - 1";
  s.rejects = [] {
    Tensor f(kQ, VarBlocks({2, 2, 2}), 1), g(kQ, VarBlocks({2, 2, 2}), 1);
    f.set(std::vector<std::size_t>{1, 1, 1}, 0, Scalar(kQ, 1));
    g.set(std::vector<std::size_t>{2, 2, 2}, 0, Scalar(kQ, 1));
    return !(gr(f + g) <= gr(f) + gr(g) - 1);
  };
  return s;
}

// directsum-pr --------------------------------------------------------------------

Tensor power_sum(const Tensor& f, std::size_t k) {
  Tensor acc = f;
  for (std::size_t i = 1; i < k; ++i) acc = direct_sum(acc, f);
  return acc;
}

Suite directsum_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    const bool use_diag = c.rng.uniform(0, 1) == 0;
    const std::size_t k = static_cast<std::size_t>(c.rng.uniform(1, 3));
    Tensor f;
    std::size_t d = 0, r = 0;
    if (use_diag) {
      d = static_cast<std::size_t>(c.rng.uniform(2, 3));
      r = static_cast<std::size_t>(c.rng.uniform(1, 2));
      f = diag(c.field(kQ), d, r, r + static_cast<std::size_t>(c.rng.uniform(0, 1)));
    } else {
      d = 3;
      f = gen_random(c.field(kQ), VarBlocks({2, 2, 2}), 1, c.sub_seed(1), c.density());
    }
    const auto one = partition_rank_bounds(f);
    const auto many = partition_rank_bounds(power_sum(f, k));
    const long cp = theorem_constants(static_cast<unsigned>(d), 1).c_pvsa.get_si();
    const long kk = static_cast<long>(k);
    // PR(f^k) <= k PR(f) and k PR(f) <= c_pvsa PR(f^k), each in its sound direction.
    bool pass = many.lo <= kk * one.hi && kk * one.lo <= cp * many.hi;
    if (use_diag) pass = pass && one.exact() && many.exact() && many.lo == kk * static_cast<long>(r);
    Outcome o;
    o.pass = pass;
    o.detail = {{"diag", use_diag}, {"k", k}, {"pr_f", {one.lo, one.hi}}, {"pr_sum", {many.lo, many.hi}}, {"c_pvsa", cp}};
    return o;
  };
  s.control = "diag(3,2,2) summed twice claimed to have PR at most (k - 1) PR(f)";
  s.rejects = [] {
    const auto f = diag(kQ, 3, 2, 2);
    return !(partition_rank_bounds(power_sum(f, 2)).lo <= 1 * partition_rank_bounds(f).hi);
  };
  return s;
}

// sandwich suites ----------------------------------------------------------------

/// diag, d = 2 random, or small random d = 3 forms.
Tensor sandwich_instance(Ctx& c, bool& known_exact) {
  const int kind = static_cast<int>(c.rng.uniform(0, 2));
  known_exact = kind != 2;
  if (kind == 0) {
    const std::size_t d = static_cast<std::size_t>(c.rng.uniform(2, 3));
    const std::size_t r = static_cast<std::size_t>(c.rng.uniform(1, 3));
    return diag(kQ, d, r, r);
  }
  if (kind == 1) return gen_random(kQ, c.random_shape({3, 3}), 1, c.sub_seed(1), c.density());
  return gen_random(kQ, c.random_shape({2, 2, 2}), 1, c.sub_seed(1), c.density());
}

Suite pvsa_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    bool known = false;
    const auto f = sandwich_instance(c, known);
    const auto ar = analytic_rank_bounds(f, ArOptions{4, c.sub_seed(2), 3});
    const auto pr = partition_rank_bounds(f);
    const long cp = theorem_constants(static_cast<unsigned>(f.num_blocks()), 1).c_pvsa.get_si();
    // AR <= PR <= c_pvsa AR, asserted between endpoints that bound in the right direction.
    bool pass = ar.lo <= pr.hi && pr.lo <= cp * ar.hi;
    if (known) pass = pass && ar.exact() && pr.exact();
    if (ar.exact() && pr.exact()) pass = pass && ar.lo <= pr.lo && pr.lo <= cp * ar.lo;
    Outcome o;
    o.pass = pass;
    o.detail = {{"shape", shape_json(f.blocks())}, {"ar", {ar.lo, ar.hi}}, {"pr", {pr.lo, pr.hi}}, {"c_pvsa", cp}};
    return o;
  };
  s.control = "diag(2,2,2) with the constant lowered to c_pvsa - 1";
  s.rejects = [] {
    const auto f = diag(kQ, 2, 2, 2);
    const long cp = theorem_constants(2, 1).c_pvsa.get_si() - 1;
    return !(partition_rank_bounds(f).lo <= cp * analytic_rank_bounds(f).hi);
  };
  return s;
}

Suite pvsg_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    bool known = false;
    const auto f = sandwich_instance(c, known);
    const long g = gr(f);
    const auto pr = partition_rank_bounds(f);
    const long cg = theorem_constants(static_cast<unsigned>(f.num_blocks()), 1).c_pvsg.get_si();
    // GR <= PR <= c_pvsg GR with GR exact.
    bool pass = g <= pr.hi && pr.lo <= cg * g;
    if (known) pass = pass && pr.exact() && pr.lo == g;
    Outcome o;
    o.pass = pass;
    o.detail = {{"shape", shape_json(f.blocks())}, {"gr", g}, {"pr", {pr.lo, pr.hi}}, {"c_pvsg", cg}};
    return o;
  };
  s.control = "diag(3,3,3) claimed to satisfy PR <= GR - 1";
  s.rejects = [] {
    const auto f = diag(kQ, 3, 3, 3);
    return !(partition_rank_bounds(f).lo <= gr(f) - 1);
  };
  return s;
}

MultiPoly random_form(Rng& rng, std::size_t n, unsigned degree) {
  const VarBlocks b = VarBlocks::single(n);
  std::vector<Term> terms;
  const int count = static_cast<int>(rng.uniform(1, 4));
  for (int t = 0; t < count; ++t) {
    Monomial m(n);
    for (unsigned e = 0; e < degree; ++e) {
      const auto v = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
      m.set(v, m[v] + 1);
    }
    long c = 0;
    while (c == 0) c = rng.uniform(-3, 3);
    terms.push_back({m, Scalar(kQ, c)});
  }
  return MultiPoly::from_terms(kQ, b, std::move(terms));
}

Suite str_suite() {
  Suite s;
  s.trial = [](Ctx& c) {
    const unsigned degree = static_cast<unsigned>(c.rng.uniform(2, 3));
    const std::size_t n = static_cast<std::size_t>(c.rng.uniform(2, degree == 2 ? 4 : 3));
    MultiPoly p = random_form(c.rng, n, degree);
    Outcome o;
    if (p.is_zero()) {
      o.pass = true;
      return o;
    }
    const auto st = strength_bounds(p);
    const long brk = birch_rank({p}).lo;
    const auto k = theorem_constants(degree, 1);
    const auto pr = partition_rank_bounds(polarize(p, degree));
    const long binom = k.c_polar.get_si();
    // Brk/2 <= str <= c_strbirch Brk and str <= PR(f_P) <= binom str.
    bool pass = (brk + 1) / 2 <= st.hi && st.lo <= k.c_strbirch.get_si() * brk && st.lo <= pr.hi && pr.lo <= binom * st.hi;
    pass = pass && (brk + 1) / 2 <= st.hi && st.lo <= (static_cast<long>(degree) - 1) * brk;
    o.pass = pass;
    o.detail = {{"poly", p.to_string()}, {"strength", {st.lo, st.hi}}, {"brk", brk}, {"pr_polar", {pr.lo, pr.hi}}};
    return o;
  };
  s.control = "x1 x2 + x3 x4 claimed to have strength at most ceil(Brk/2) - 1";
  s.rejects = [] {
    const VarBlocks b = VarBlocks::single(4);
    auto x = [&](std::size_t i) { return MultiPoly::variable(kQ, b, i); };
    const auto p = x(0) * x(1) + x(2) * x(3);
    const long brk = birch_rank({p}).lo;
    return !(strength_bounds(p).lo <= (brk + 1) / 2 - 1);
  };
  return s;
}

const std::map<std::string, std::function<Suite()>>& registry() {
  static const std::map<std::string, std::function<Suite()>> r{
      {"codim-formula", codim_suite},   {"fixed-rank", fixed_rank_suite},       {"krull", krull_suite},
      {"slicing", slicing_suite},       {"additivity", additivity_suite},       {"monotonicity", monotonicity_suite},
      {"subadditivity", subadditivity_suite}, {"directsum-pr", directsum_suite}, {"sandwich-pvsa", pvsa_suite},
      {"sandwich-pvsg", pvsg_suite},    {"sandwich-str", str_suite},
  };
  return r;
}

std::string repro_line(const SuiteOptions& o, std::size_t trial) {
  std::ostringstream s;
  s << "mlv verify " << o.name << " -n " << o.trials << " --seed " << o.seed;
  if (!o.shape.empty()) {
    s << " --shape ";
    for (std::size_t i = 0; i < o.shape.size(); ++i) s << (i ? "," : "") << o.shape[i];
  }
  if (o.field) s << " --field " << o.field->to_string();
  if (o.d) s << " --d " << *o.d;
  if (o.m) s << " --m " << *o.m;
  s << " --only-trial " << trial;
  return s.str();
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

SuiteReport run_suite(const SuiteOptions& opts) {
  const auto it = registry().find(opts.name);
  if (it == registry().end()) fail(ErrorCode::UnknownSuite, "unknown suite '" + opts.name + "'");
  const Suite suite = it->second();
  SuiteReport rep;
  rep.name = opts.name;
  for (std::size_t i = 0; i < opts.trials; ++i) {
    if (opts.only_trial && *opts.only_trial != i) continue;
    TrialResult t;
    t.index = i;
    t.seed = Rng::derive(opts.seed, i);
    t.repro = repro_line(opts, i);
    Rng rng(t.seed);
    Ctx ctx{opts, rng, t.seed};
    try {
      auto o = suite.trial(ctx);
      t.pass = o.pass;
      t.detail = std::move(o.detail);
    } catch (const Error& e) {
      t.pass = false;
      t.detail = {{"error", e.what()}};
    }
    rep.trials.push_back(std::move(t));
  }
  rep.control = suite.control;
  try {
    rep.control_rejected = suite.rejects();
  } catch (const Error&) {
    rep.control_rejected = true;
  }
  return rep;
}

nlohmann::json suite_to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["schema"] = "1";
  j["suite"] = r.name;
  j["passed"] = r.passed();
  j["failed"] = r.failed();
  j["negative_control"] = {{"fixture", r.control}, {"rejected", r.control_rejected}};
  auto trials = nlohmann::json::array();
  for (const auto& t : r.trials) {
    nlohmann::json e{{"trial", t.index}, {"seed", t.seed}, {"pass", t.pass}, {"detail", t.detail}};
    if (!t.pass) e["repro"] = t.repro;
    trials.push_back(std::move(e));
  }
  j["trials"] = trials;
  j["ok"] = r.ok();
  return j;
}

}  // namespace mlv
