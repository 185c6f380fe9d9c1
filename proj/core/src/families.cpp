#include "mlv/families.hpp"

#include <algorithm>
#include <numeric>

#include "mlv/error.hpp"
#include "mlv/poly_json.hpp"
#include "mlv/poly_matrix.hpp"

namespace mlv {

std::vector<std::size_t> FixedRankChart::free_cols(std::size_t n) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < n; ++c)
    if (!std::binary_search(cols.begin(), cols.end(), c)) out.push_back(c);
  return out;
}

namespace {

void check_chart(const ScalarMatrix& m, const FixedRankChart& chart) {
  MLV_REQUIRE(chart.rows.size() == chart.cols.size(), ErrorCode::SizeError, "chart needs |I| = |J|");
  MLV_REQUIRE(chart.r() <= std::min(m.rows(), m.cols()), ErrorCode::SizeError, "chart rank exceeds matrix size");
  MLV_REQUIRE(std::is_sorted(chart.rows.begin(), chart.rows.end()) && std::is_sorted(chart.cols.begin(), chart.cols.end()),
              ErrorCode::BadParams, "chart indices must be increasing");
  for (auto i : chart.rows) MLV_REQUIRE(i < m.rows(), ErrorCode::SizeError, "chart row out of range");
  for (auto j : chart.cols) MLV_REQUIRE(j < m.cols(), ErrorCode::SizeError, "chart column out of range");
}

}  // namespace

std::vector<Scalar> psi_chart_solve(const ScalarMatrix& m, const std::vector<Scalar>& w, const FixedRankChart& chart) {
  check_chart(m, chart);
  const auto free = chart.free_cols(m.cols());
  MLV_REQUIRE(w.size() == free.size(), ErrorCode::LengthMismatch, "w must have n - r entries");
  std::vector<Scalar> v(m.cols(), Scalar::zero(m.field()));
  for (std::size_t k = 0; k < free.size(); ++k) v[free[k]] = w[k];
  if (chart.r() == 0) return v;
  const ScalarMatrix m1 = m.submatrix(chart.rows, chart.cols);
  std::vector<Scalar> rhs(chart.r(), Scalar::zero(m.field()));
  for (std::size_t i = 0; i < chart.r(); ++i)
    for (std::size_t k = 0; k < free.size(); ++k) rhs[i] -= m(chart.rows[i], free[k]) * w[k];
  const auto sol = solve(m1, rhs);
  for (std::size_t i = 0; i < chart.r(); ++i) v[chart.cols[i]] = sol[i];
  return v;
}

ChartProjection phi_project(const ScalarMatrix& m, const std::vector<Scalar>& v, const FixedRankChart& chart) {
  check_chart(m, chart);
  MLV_REQUIRE(v.size() == m.cols(), ErrorCode::LengthMismatch, "v must have n entries");
  ChartProjection out{m, {}};
  for (auto c : chart.free_cols(m.cols())) out.free.push_back(v[c]);
  return out;
}

const MultiPoly& ShiftedSystem::function(std::size_t j, std::uint32_t fixed) const {
  const std::size_t per = std::size_t{1} << system.num_blocks();
  MLV_REQUIRE(j < system.m() && fixed < per, ErrorCode::BadParams, "no such shifted function");
  return functions[j * per + fixed];
}

namespace {

std::size_t stage_class_of(const MultiPoly& p) {
  if (p.is_zero()) return 0;
  const auto deg = p.block_degrees();
  std::size_t s = 0;
  for (std::size_t b = 0; b < deg.size(); ++b)
    if (deg[b] > 0) s = b + 1;
  return s;
}

}  // namespace

ShiftedSystem shifted_system(const Tensor& system, const BlockPoint& v, const std::vector<Scalar>& c) {
  MLV_REQUIRE(c.size() == system.m(), ErrorCode::LengthMismatch, "one target per component");
  const auto value = eval_tensor(system, v);
  for (std::size_t j = 0; j < c.size(); ++j)
    MLV_REQUIRE(value[j] == c[j], ErrorCode::NotASolution,
                "f_" + std::to_string(j) + "(v) = " + value[j].to_string() + " differs from c = " + c[j].to_string());
  const std::size_t d = system.num_blocks();
  MLV_REQUIRE(d <= 16, ErrorCode::ResourceLimit, "too many blocks for the shifted system");
  ShiftedSystem s{system, v, c, {}, {}, {}};
  const auto polys = tensor_to_polys(system);
  const auto flat = flatten_point(v);
  for (std::size_t j = 0; j < system.m(); ++j) {
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      std::vector<std::size_t> fixed;
      for (std::size_t b = 0; b < d; ++b)
        if (mask & (1u << b)) fixed.push_back(b);
      MultiPoly g = shift_substitute(polys[j], flat, fixed);
      g -= MultiPoly::constant(system.field(), system.blocks(), c[j]);
      s.ids.push_back({j, mask});
      s.stage_class.push_back(stage_class_of(g));
      s.functions.push_back(std::move(g));
    }
  }
  return s;
}

std::size_t RationalFamily::param_offset(std::size_t s) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < s && i < stages.size(); ++i) off += stages[i].free.size();
  return off;
}

namespace {

VarBlocks family_ring(const VarBlocks& b) {
  auto sizes = b.sizes();
  const auto orig = b.sizes();
  sizes.insert(sizes.end(), orig.begin(), orig.end());
  MLV_REQUIRE(2 * b.total() <= kMaxVars, ErrorCode::ResourceLimit,
              "family ring needs " + std::to_string(2 * b.total()) + " variables");
  return VarBlocks(sizes);
}

MultiPoly embed(const MultiPoly& p, const VarBlocks& ring) {
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    Monomial m(ring.total());
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (t.mono[i]) m.set(i, t.mono[i]);
    terms.push_back({m, t.coef});
  }
  return MultiPoly::from_terms(p.field(), ring, std::move(terms));
}

/// Divides the tuple by its rational content and makes the denominator's
/// leading coefficient positive.
void remove_content(std::vector<MultiPoly>& nums, MultiPoly& den) {
  if (!den.field().is_rationals()) return;
  mpz_class g = 0, l = 1;
  auto visit = [&](const MultiPoly& p) {
    for (const auto& t : p.terms()) {
      const auto& q = t.coef.rational();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num().get_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    }
  };
  visit(den);
  for (const auto& n : nums) visit(n);
  if (g == 0) return;
  mpz_class gn = abs(g);
  if (den.terms().back().coef.rational() < 0) gn = -gn;
  const Scalar scale = Scalar::make(den.field(), l, gn);
  den = scale * den;
  for (auto& n : nums) n = scale * n;
}

struct StageMatrix {
  PolyMatrix linear;                // rows x n_s, polys in blocks < s
  std::vector<MultiPoly> affine;    // part free of block s
};

StageMatrix stage_matrix(const ShiftedSystem& sys, const std::vector<std::size_t>& rows, std::size_t s) {
  const VarBlocks& b = sys.system.blocks();
  const FieldId f = sys.system.field();
  const std::size_t n = b.size(s), off = b.offset(s);
  std::vector<std::vector<std::vector<Term>>> lin(rows.size(), std::vector<std::vector<Term>>(n));
  std::vector<std::vector<Term>> aff(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& t : sys.functions[rows[r]].terms()) {
      std::size_t hit = n;
      for (std::size_t k = 0; k < n; ++k)
        if (t.mono[off + k]) hit = k;
      if (hit == n) {
        aff[r].push_back(t);
      } else {
        Monomial m = t.mono;
        m.set(off + hit, 0);
        lin[r][hit].push_back({m, t.coef});
      }
    }
  }
  StageMatrix out{PolyMatrix(rows.size(), n, f, b), {}};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < n; ++k) out.linear(r, k) = MultiPoly::from_terms(f, b, std::move(lin[r][k]));
    out.affine.push_back(MultiPoly::from_terms(f, b, std::move(aff[r])));
  }
  return out;
}

/// Point of the family ring: x blocks for stages < upto, t blocks from params.
/// Returns false when a denominator vanishes.
bool eval_prefix(const RationalFamily& w, const std::vector<Scalar>& params, std::size_t upto, std::vector<Scalar>& pt,
                 std::size_t* bad_stage = nullptr) {
  const std::size_t n = w.blocks.total();
  const std::size_t d = w.blocks.num_blocks();
  pt.assign(2 * n, Scalar::zero(w.field));
  std::size_t p = 0;
  for (std::size_t s = 0; s < upto; ++s)
    for (auto k : w.stages[s].free) pt[w.ring.var(d + s, k)] = params.at(p++);
  for (std::size_t s = 0; s < upto; ++s) {
    const auto& st = w.stages[s];
    const Scalar den = st.denominator.evaluate(pt);
    if (den.is_zero()) {
      if (bad_stage) *bad_stage = s;
      return false;
    }
    const Scalar inv = invert(den);
    for (std::size_t i = 0; i < st.numerators.size(); ++i)
      pt[w.ring.var(s, i)] = st.numerators[i].evaluate(pt) * inv;
  }
  return true;
}

std::vector<Scalar> ambient_part(const RationalFamily& w, const std::vector<Scalar>& pt) {
  return std::vector<Scalar>(pt.begin(), pt.begin() + static_cast<std::ptrdiff_t>(w.blocks.total()));
}

std::vector<Scalar> random_ints(FieldId f, std::size_t count, int height, Rng& rng) {
  std::vector<Scalar> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(f, static_cast<long>(rng.uniform(-height, height)));
  return out;
}

bool all_vanish(const std::vector<MultiPoly>& ps, const std::vector<std::size_t>& which, std::span<const Scalar> x) {
  for (auto i : which)
    if (!ps[i].evaluate(x).is_zero()) return false;
  return true;
}

/// Builds the stage formulas for block s given a chart of the stage matrix.
void fill_formulas(FamilyStage& st, const StageMatrix& sm, const RationalFamily& w) {
  const FieldId f = w.field;
  const VarBlocks& R = w.ring;
  const std::size_t d = w.blocks.num_blocks();
  const std::size_t s = st.block, n = w.blocks.size(s);
  const auto& I = st.chart.rows;
  const auto& J = st.chart.cols;
  const std::size_t r = st.chart.r();
  st.free = st.chart.free_cols(n);
  const MultiPoly one = MultiPoly::constant(f, R, Scalar::one(f));
  st.numerators.assign(n, MultiPoly(f, R));
  st.denominator = one;
  st.pivot_minor = one;
  if (r == 0) {
    for (auto k : st.free) st.numerators[k] = MultiPoly::variable(f, R, R.var(d + s, k));
    return;
  }
  PolyMatrix m1(r, r, f, R);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) m1(a, b) = embed(sm.linear(I[a], J[b]), R);
  const MultiPoly det = poly_determinant(m1);
  st.pivot_minor = det;
  if (st.free.empty()) return;
  for (auto k : st.free) st.numerators[k] = det * MultiPoly::variable(f, R, R.var(d + s, k));
  for (std::size_t i = 0; i < r; ++i) {
    MultiPoly acc(f, R);
    for (auto k : st.free) {
      PolyMatrix rep = m1;
      for (std::size_t a = 0; a < r; ++a) rep(a, i) = embed(sm.linear(I[a], k), R);
      acc -= poly_determinant(rep) * MultiPoly::variable(f, R, R.var(d + s, k));
    }
    st.numerators[J[i]] = std::move(acc);
  }
  st.denominator = det;
  remove_content(st.numerators, st.denominator);
}

}  // namespace

RationalFamily build_family(const ShiftedSystem& sys, Rng& rng, const FamilyOptions& opts) {
  const FieldId f = sys.system.field();
  MLV_REQUIRE(f.is_rationals(), ErrorCode::FiniteFieldUnsupported,
              "rational families need an infinite field; got " + f.to_string());
  const VarBlocks& b = sys.system.blocks();
  const std::size_t d = b.num_blocks();
  RationalFamily w{f, b, family_ring(b), sys.v, 0, {}};
  for (std::size_t s = 0; s < d; ++s) {
    FamilyStage st;
    st.block = s;
    for (std::size_t i = 0; i < sys.ids.size(); ++i)
      if (sys.stage_class[i] == s + 1) st.constraints.push_back(i);
    const std::size_t nparams = w.param_offset(s);
    if (st.constraints.empty()) {
      st.sample_params.assign(nparams, Scalar::zero(f));
      fill_formulas(st, StageMatrix{PolyMatrix(0, b.size(s), f, b), {}}, w);
      w.stages.push_back(std::move(st));
      continue;
    }
    const StageMatrix sm = stage_matrix(sys, st.constraints, s);
    std::vector<std::size_t> rows_all(st.constraints.size());
    std::iota(rows_all.begin(), rows_all.end(), 0);
    const std::size_t cap = std::min(sm.linear.rows(), sm.linear.cols());
    const std::size_t want = std::max(opts.rank_samples, opts.soundness_trials);

    std::size_t failures = 0, valid = 0;
    int height = opts.initial_height;
    long best = -1;
    std::vector<Scalar> best_params, pt;
    bool built = false;
    while (!built) {
      while (valid < want) {
        if (failures >= opts.attempts)
          fail(ErrorCode::DegenerateSampling, "stage " + std::to_string(s) + ": no valid sample within " +
                                                  std::to_string(opts.attempts) + " attempts");
        auto params = random_ints(f, nparams, height, rng);
        if (!eval_prefix(w, params, s, pt)) {
          if (++failures % 5 == 0) height *= 2;
          continue;
        }
        ++valid;
        MLV_REQUIRE(all_vanish(sm.affine, rows_all, ambient_part(w, pt)), ErrorCode::CheckFailed,
                    "stage " + std::to_string(s) + ": affine part does not vanish on the current family");
        if (best < static_cast<long>(cap)) {
          const long rk = static_cast<long>(rank(sm.linear.evaluate(ambient_part(w, pt))));
          if (rk > best) {
            best = rk;
            best_params = params;
          }
        }
      }
      std::vector<Scalar> zero(nparams, Scalar::zero(f));
      std::vector<Scalar> chosen = best_params;
      if (eval_prefix(w, zero, s, pt) && static_cast<long>(rank(sm.linear.evaluate(ambient_part(w, pt)))) == best)
        chosen = zero;
      eval_prefix(w, chosen, s, pt);
      const ScalarMatrix at = sm.linear.evaluate(ambient_part(w, pt));
      const auto piv = select_pivots(at);
      st.chart = FixedRankChart{piv.rows, piv.cols};
      st.sample_params = chosen;
      fill_formulas(st, sm, w);

      // A fresh point of the extended family must satisfy every stage row; a
      // failure means the sampled rank was too small.
      RationalFamily trial = w;
      trial.stages.push_back(st);
      std::vector<Scalar> q;
      bool checked = false;
      while (!checked && failures < opts.attempts) {
        auto params = random_ints(f, nparams + st.free.size(), height, rng);
        if (!eval_prefix(trial, params, s + 1, q)) {
          if (++failures % 5 == 0) height *= 2;
          continue;
        }
        checked = true;
      }
      if (!checked)
        fail(ErrorCode::DegenerateSampling, "stage " + std::to_string(s) + ": chart is undefined at every sample");
      if (all_vanish(sys.functions, st.constraints, ambient_part(w, q))) {
        built = true;
      } else {
        if (++failures % 5 == 0) height *= 2;
        valid = 0;
      }
    }
    st.attempts = failures;
    w.stages.push_back(std::move(st));
  }
  std::size_t rsum = 0, nsum = 0;
  for (const auto& st : w.stages) {
    rsum += st.chart.r();
    nsum += b.size(st.block);
  }
  const std::size_t delta = sys.ids.size();
  MLV_REQUIRE(rsum <= delta, ErrorCode::CheckFailed, "stage ranks exceed the number of constraints");
  w.parameter_dim = nsum - rsum;
  MLV_REQUIRE(w.parameter_dim == w.param_offset(d), ErrorCode::CheckFailed, "parameter count mismatch");
  return w;
}

BlockPoint family_eval_shifted(const RationalFamily& w, const std::vector<Scalar>& params) {
  MLV_REQUIRE(params.size() == w.parameter_dim, ErrorCode::LengthMismatch,
              "family has " + std::to_string(w.parameter_dim) + " parameters");
  std::vector<Scalar> pt;
  std::size_t bad = 0;
  if (!eval_prefix(w, params, w.stages.size(), pt, &bad))
    fail(ErrorCode::PivotDenominatorZero, "stage " + std::to_string(bad) + " denominator vanishes");
  return split_point(w.blocks, ambient_part(w, pt));
}

BlockPoint family_eval(const RationalFamily& w, const std::vector<Scalar>& params) {
  auto x = family_eval_shifted(w, params);
  for (std::size_t b = 0; b < x.size(); ++b)
    for (std::size_t i = 0; i < x[b].size(); ++i) x[b][i] += w.v[b][i];
  return x;
}

ScalarMatrix family_jacobian(const RationalFamily& w, const std::vector<Scalar>& params) {
  MLV_REQUIRE(params.size() == w.parameter_dim, ErrorCode::LengthMismatch, "wrong parameter count");
  std::vector<Scalar> pt;
  std::size_t bad = 0;
  if (!eval_prefix(w, params, w.stages.size(), pt, &bad))
    fail(ErrorCode::PivotDenominatorZero, "stage " + std::to_string(bad) + " denominator vanishes");
  const std::size_t n = w.blocks.total(), d = w.blocks.num_blocks(), P = w.parameter_dim;
  const FieldId f = w.field;
  ScalarMatrix jac(n, P, f);
  // Parameter index of each t variable.
  std::vector<long> tindex(2 * n, -1);
  std::size_t p = 0;
  for (std::size_t s = 0; s < w.stages.size(); ++s)
    for (auto k : w.stages[s].free) tindex[w.ring.var(d + s, k)] = static_cast<long>(p++);
  for (std::size_t s = 0; s < w.stages.size(); ++s) {
    const auto& st = w.stages[s];
    const Scalar den = st.denominator.evaluate(pt);
    const Scalar inv2 = invert(den * den);
    for (std::size_t i = 0; i < st.numerators.size(); ++i) {
      const auto& num = st.numerators[i];
      const Scalar nv = num.evaluate(pt);
      const std::uint64_t vars = num.support() | st.denominator.support();
      const std::size_t row = w.blocks.var(s, i);
      for (std::size_t u = 0; u < 2 * n; ++u) {
        if (!(vars >> u & 1u)) continue;
        const Scalar g = (num.derivative(u).evaluate(pt) * den - nv * st.denominator.derivative(u).evaluate(pt)) * inv2;
        if (g.is_zero()) continue;
        if (u < n) {
          for (std::size_t c = 0; c < P; ++c) jac(row, c) += g * jac(u, c);
        } else {
          jac(row, static_cast<std::size_t>(tindex[u])) += g;
        }
      }
    }
  }
  return jac;
}

std::size_t family_jacobian_rank(const RationalFamily& w, const std::vector<Scalar>& params) {
  const std::size_t rk = rank(family_jacobian(w, params));
  MLV_REQUIRE(rk <= w.parameter_dim, ErrorCode::CheckFailed, "Jacobian rank exceeds the parameter count");
  return rk;
}

std::vector<Scalar> sample_family_params(const RationalFamily& w, Rng& rng, int height, std::size_t attempts) {
  std::vector<Scalar> pt;
  for (std::size_t a = 0; a < attempts; ++a) {
    auto params = random_ints(w.field, w.parameter_dim, height, rng);
    if (eval_prefix(w, params, w.stages.size(), pt)) return params;
    if ((a + 1) % 5 == 0) height *= 2;
  }
  fail(ErrorCode::DegenerateSampling, "no family point found within " + std::to_string(attempts) + " attempts");
}

BlockPoint random_rational_solution(const Tensor& t, Rng& rng, int height) {
  MLV_REQUIRE(t.homogeneous(), ErrorCode::NotHomogeneous, "random solutions need a multilinear system");
  const std::size_t d = t.num_blocks();
  BlockPoint v;
  if (d == 0) return v;
  Tensor cur = t;
  for (std::size_t b = 0; b + 1 < d; ++b) {
    v.push_back(random_ints(t.field(), t.size(b), height, rng));
    cur = contract(cur, 0, v.back());
  }
  const std::size_t n = t.size(d - 1);
  ScalarMatrix lin(t.m(), n, t.field());
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<std::size_t> idx{k + 1};
    for (std::size_t o = 0; o < t.m(); ++o) lin(o, k) = cur.at(idx, o);
  }
  std::vector<Scalar> last(n, Scalar::zero(t.field()));
  for (const auto& basis : nullspace(lin)) {
    const Scalar c(t.field(), static_cast<long>(rng.uniform(-height, height)));
    for (std::size_t k = 0; k < n; ++k) last[k] += c * basis[k];
  }
  v.push_back(std::move(last));
  return v;
}

RationalFamily build_family_through(const Tensor& system, const BlockPoint& v, Rng& rng) {
  return build_family(shifted_system(system, v, eval_tensor(system, v)), rng);
}

FamilyCertificate certify_family(const RationalFamily& w, const ShiftedSystem& s, std::size_t trials, Rng& rng) {
  MLV_REQUIRE(trials >= 1, ErrorCode::BadParams, "at least one trial is required");
  MLV_REQUIRE(w.field.is_rationals(), ErrorCode::FiniteFieldUnsupported, "families are certified over Q only");
  const FieldId f = w.field;
  FamilyCertificate cert;
  cert.parameter_dim = w.parameter_dim;
  cert.ambient_dim = w.ambient_dim();
  cert.codim_bound = static_cast<long>(s.ids.size());
  std::vector<std::size_t> all(s.functions.size());
  std::iota(all.begin(), all.end(), 0);

  cert.vanishing_ok = true;
  for (std::size_t t = 0; t < trials; ++t) {
    auto params = sample_family_params(w, rng);
    const auto x = flatten_point(family_eval_shifted(w, params));
    cert.vanishing_ok = cert.vanishing_ok && all_vanish(s.functions, all, x);
    cert.vanishing_samples.push_back(std::move(params));
  }
  cert.vanishing_trials = trials;

  cert.scaling_ok = true;
  for (std::size_t t = 0; t < trials; ++t) {
    auto params = sample_family_params(w, rng);
    Scalar lambda(f, 0);
    while (lambda.is_zero()) lambda = Scalar(f, static_cast<long>(rng.uniform(-16, 16)));
    auto x = flatten_point(family_eval_shifted(w, params));
    for (auto& c : x) c *= lambda;
    cert.scaling_ok = cert.scaling_ok && all_vanish(s.functions, all, x);
    cert.scaling_samples.push_back({std::move(params), lambda});
  }
  cert.scaling_trials = trials;

  cert.jacobian_params = sample_family_params(w, rng);
  cert.jac_rank = family_jacobian_rank(w, cert.jacobian_params);

  std::vector<Scalar> zero(w.parameter_dim, Scalar::zero(f)), pt;
  if (eval_prefix(w, zero, w.stages.size(), pt)) {
    cert.base_point_method = "eval";
    cert.base_point_ok = std::all_of(pt.begin(), pt.begin() + static_cast<std::ptrdiff_t>(w.ambient_dim()),
                                     [](const Scalar& c) { return c.is_zero(); });
  } else {
    cert.base_point_method = "cone";
    cert.base_point_ok = cert.scaling_ok;
  }
  cert.irreducibility_checked = false;
  const long need = static_cast<long>(cert.ambient_dim) - cert.codim_bound;
  cert.verdict = cert.vanishing_ok && cert.scaling_ok && cert.base_point_ok && static_cast<long>(cert.jac_rank) >= need;
  return cert;
}

namespace {

nlohmann::json scalars_json(const std::vector<Scalar>& v) {
  auto j = nlohmann::json::array();
  for (const auto& c : v) j.push_back(scalar_to_json(c));
  return j;
}

nlohmann::json point_json(const BlockPoint& p) {
  auto j = nlohmann::json::array();
  for (const auto& b : p) j.push_back(scalars_json(b));
  return j;
}

}  // namespace

nlohmann::json family_to_json(const RationalFamily& w) {
  nlohmann::json j;
  j["blocks"] = w.blocks.sizes();
  j["field"] = w.field.to_string();
  j["v"] = point_json(w.v);
  j["parameter_dim"] = w.parameter_dim;
  auto stages = nlohmann::json::array();
  for (const auto& st : w.stages) {
    nlohmann::json s;
    s["block"] = st.block;
    s["constraints"] = st.constraints;
    s["rows"] = st.chart.rows;
    s["cols"] = st.chart.cols;
    s["rank"] = st.chart.r();
    s["free"] = st.free;
    auto nums = nlohmann::json::array();
    for (const auto& p : st.numerators) nums.push_back(poly_to_json(p));
    s["numerators"] = nums;
    s["denominator"] = poly_to_json(st.denominator);
    s["pivot_minor"] = poly_to_json(st.pivot_minor);
    s["sample_params"] = scalars_json(st.sample_params);
    s["attempts"] = st.attempts;
    stages.push_back(std::move(s));
  }
  j["stages"] = stages;
  return j;
}

nlohmann::json certificate_to_json(const ShiftedSystem& s, const RationalFamily& w, const FamilyCertificate& cert) {
  nlohmann::json j;
  j["schema"] = "1";
  j["kind"] = "family-certificate";
  j["tensor"] = tensor_to_json(s.system);
  j["v"] = point_json(s.v);
  j["c"] = scalars_json(s.c);
  auto family = family_to_json(w);
  auto constraints = nlohmann::json::array();
  for (const auto& id : s.ids) {
    std::vector<std::size_t> fixed;
    for (std::size_t b = 0; b < s.system.num_blocks(); ++b)
      if (id.fixed >> b & 1u) fixed.push_back(b);
    constraints.push_back({{"j", id.j}, {"I", fixed}});
  }
  family["constraint_ids"] = constraints;
  j["family"] = family;
  nlohmann::json c;
  auto van = nlohmann::json::array();
  for (const auto& p : cert.vanishing_samples)
    van.push_back({{"params", scalars_json(p)}, {"point", scalars_json(flatten_point(family_eval_shifted(w, p)))}});
  c["vanishing"] = van;
  auto sc = nlohmann::json::array();
  for (const auto& t : cert.scaling_samples) sc.push_back({{"params", scalars_json(t.params)}, {"lambda", scalar_to_json(t.lambda)}});
  c["scaling"] = sc;
  c["jacobian_params"] = scalars_json(cert.jacobian_params);
  c["jac_rank"] = cert.jac_rank;
  c["parameter_dim"] = cert.parameter_dim;
  c["ambient_dim"] = cert.ambient_dim;
  c["codim_bound"] = cert.codim_bound;
  c["vanishing_ok"] = cert.vanishing_ok;
  c["scaling_ok"] = cert.scaling_ok;
  c["base_point_ok"] = cert.base_point_ok;
  c["base_point_method"] = cert.base_point_method;
  c["irreducibility"] = "not machine-checked";
  c["verdict"] = cert.verdict;
  j["checks"] = c;
  return j;
}

}  // namespace mlv
