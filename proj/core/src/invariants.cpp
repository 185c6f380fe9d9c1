#include "mlv/invariants.hpp"

#include <algorithm>
#include <climits>

#include "mlv/error.hpp"
#include "mlv/families.hpp"
#include "mlv/groebner.hpp"
#include "mlv/poly_matrix.hpp"
#include "mlv/strata.hpp"

namespace mlv {

std::string_view to_string(InvariantName n) {
  switch (n) {
    case InvariantName::GR: return "GR";
    case InvariantName::AR: return "AR";
    case InvariantName::Brk: return "Brk";
    case InvariantName::PR: return "PR";
    case InvariantName::Strength: return "Strength";
    case InvariantName::CollectiveBrk: return "CollectiveBrk";
    case InvariantName::CollectiveStrength: return "CollectiveStrength";
  }
  return "?";
}

namespace {

InvariantReport make_report(InvariantName name, long lo, long hi, FieldId field) {
  MLV_REQUIRE(lo <= hi, ErrorCode::CheckFailed,
              std::string(to_string(name)) + " interval is empty: [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  InvariantReport r;
  r.name = name;
  r.lo = lo;
  r.hi = hi;
  r.field = field;
  return r;
}

long ceil_div(long a, long b) { return a <= 0 ? 0 : (a + b - 1) / b; }

long clamp_long(const mpz_class& z) { return z.fits_slong_p() ? z.get_si() : LONG_MAX; }

void check_polys(const std::vector<MultiPoly>& ps, unsigned& degree) {
  MLV_REQUIRE(!ps.empty(), ErrorCode::BadParams, "at least one polynomial is required");
  degree = 0;
  for (const auto& p : ps) {
    MLV_REQUIRE(p.field() == ps[0].field(), ErrorCode::FieldMismatch, "polynomials over different fields");
    MLV_REQUIRE(p.blocks().total() == ps[0].blocks().total(), ErrorCode::BlockMismatch, "polynomials in different rings");
    if (p.is_zero()) continue;
    MLV_REQUIRE(p.is_homogeneous(), ErrorCode::NotHomogeneous, "polynomials must be homogeneous");
    const unsigned dg = p.total_degree();
    MLV_REQUIRE(degree == 0 || degree == dg, ErrorCode::BadParams, "polynomials must share one degree");
    degree = dg;
  }
}

}  // namespace

nlohmann::json report_to_json(const InvariantReport& r) {
  nlohmann::json j;
  j["schema"] = "1";
  j["name"] = std::string(to_string(r.name));
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  j["exact"] = r.exact();
  j["value"] = r.exact() ? nlohmann::json(r.lo) : nlohmann::json(nullptr);
  j["field"] = r.field.to_string();
  j["certificates"] = r.certificates;
  return j;
}

InvariantReport geometric_rank(const Tensor& f, std::optional<std::size_t> slice_block, bool all_slicings) {
  MLV_REQUIRE(f.homogeneous(), ErrorCode::NotHomogeneous, "geometric rank needs a multilinear tensor");
  if (f.m() > 1) {
    const long c = direct_codim(f);
    auto r = make_report(InvariantName::GR, c, c, f.field());
    r.certificates = {{"mode", "map"}, {"ambient", f.blocks().total()}, {"dim", static_cast<long>(f.blocks().total()) - c}};
    return r;
  }
  const std::size_t d = f.num_blocks();
  MLV_REQUIRE(d >= 2, ErrorCode::BadParams, "geometric rank of a form needs d >= 2");
  const std::size_t j = slice_block.value_or(d - 1);
  MLV_REQUIRE(j < d, ErrorCode::ShapeMismatch, "slice block out of range");
  const auto sys = slice_system(f, j);
  const long c = direct_codim(sys);
  auto r = make_report(InvariantName::GR, c, c, f.field());
  r.certificates = {{"mode", "form"}, {"slice_block", j}, {"ambient", sys.blocks().total()},
                    {"dim", static_cast<long>(sys.blocks().total()) - c}};
  if (all_slicings) {
    std::vector<long> per(d);
    for (std::size_t b = 0; b < d; ++b) {
      per[b] = b == j ? c : direct_codim(slice_system(f, b));
      MLV_REQUIRE(per[b] == c, ErrorCode::CheckFailed,
                  "slicing along block " + std::to_string(b) + " gives " + std::to_string(per[b]) + ", block " +
                      std::to_string(j) + " gives " + std::to_string(c));
    }
    r.certificates["per_block"] = per;
  }
  return r;
}

InvariantReport analytic_rank_bounds(const Tensor& f, const ArOptions& opts) {
  MLV_REQUIRE(f.field().is_rationals(), ErrorCode::FiniteFieldUnsupported,
              "analytic rank bounds need an infinite field; got " + f.field().to_string());
  MLV_REQUIRE(f.homogeneous(), ErrorCode::NotHomogeneous, "analytic rank needs a multilinear tensor");
  const std::size_t d = f.num_blocks();
  MLV_REQUIRE(f.m() > 1 || d >= 2, ErrorCode::BadParams, "analytic rank of a form needs d >= 2");
  const Tensor sys = f.m() > 1 ? f : slice_system(f, d - 1);
  const auto gr = geometric_rank(f);
  const long n = static_cast<long>(sys.blocks().total());
  const FieldId Q = f.field();
  Rng rng(Rng::derive(opts.seed, 0xA5));

  std::vector<BlockPoint> candidates;
  BlockPoint zero;
  for (std::size_t b = 0; b < sys.num_blocks(); ++b) zero.emplace_back(sys.size(b), Scalar::zero(Q));
  candidates.push_back(zero);
  auto random_block = [&](std::size_t b) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < sys.size(b); ++i) v.emplace_back(Q, static_cast<long>(rng.uniform(-5, 5)));
    return v;
  };
  if (sys.num_blocks() >= 2)
    for (std::size_t z = 0; z < sys.num_blocks(); ++z) {
      BlockPoint v;
      for (std::size_t b = 0; b < sys.num_blocks(); ++b) v.push_back(b == z ? zero[b] : random_block(b));
      candidates.push_back(std::move(v));
    }
  for (std::size_t k = 0; k < opts.point_budget; ++k) candidates.push_back(random_rational_solution(sys, rng));

  long hi = n;
  std::size_t tried = 0, degenerate = 0;
  std::optional<std::pair<ShiftedSystem, RationalFamily>> best;
  for (const auto& v : candidates) {
    if (hi == gr.lo) break;
    ++tried;
    try {
      auto s = shifted_system(sys, v, std::vector<Scalar>(sys.m(), Scalar::zero(Q)));
      auto w = build_family(s, rng);
      const long jr = static_cast<long>(family_jacobian_rank(w, sample_family_params(w, rng)));
      if (n - jr < hi || !best) {
        hi = std::min(hi, n - jr);
        best.emplace(std::move(s), std::move(w));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSampling && e.code() != ErrorCode::PivotDenominatorZero) throw;
      ++degenerate;
    }
  }
  nlohmann::json certs = {{"system", f.m() > 1 ? "map" : "slice"}, {"ambient", n}, {"gr", gr.certificates},
                          {"candidates_tried", tried}, {"degenerate_candidates", degenerate}};
  if (best) {
    const auto cert = certify_family(best->second, best->first, opts.cert_trials, rng);
    MLV_REQUIRE(cert.verdict, ErrorCode::CheckFailed, "family certificate for the AR upper bound failed");
    hi = std::min(hi, n - static_cast<long>(cert.jac_rank));
    nlohmann::json bp = nlohmann::json::array();
    for (const auto& blk : best->first.v) {
      auto a = nlohmann::json::array();
      for (const auto& c : blk) a.push_back(c.to_string());
      bp.push_back(a);
    }
    certs["family"] = {{"base_point", bp},
                       {"parameter_dim", cert.parameter_dim},
                       {"jac_rank", cert.jac_rank},
                       {"base_point_method", cert.base_point_method},
                       {"vanishing_trials", cert.vanishing_trials},
                       {"scaling_trials", cert.scaling_trials},
                       {"verdict", cert.verdict}};
  }
  auto r = make_report(InvariantName::AR, gr.lo, hi, Q);
  if (f.m() == 1 && d == 2)
    MLV_REQUIRE(r.exact(), ErrorCode::CheckFailed, "analytic rank of a matrix must be exact");
  r.certificates = std::move(certs);
  return r;
}

InvariantReport birch_rank(const std::vector<MultiPoly>& ps) {
  unsigned degree = 0;
  check_polys(ps, degree);
  const std::size_t m = ps.size(), n = ps[0].nvars();
  MLV_REQUIRE(m <= n, ErrorCode::TooManyPolynomials,
              std::to_string(m) + " polynomials in " + std::to_string(n) + " variables");
  MLV_REQUIRE(degree == 0 || degree >= 2, ErrorCode::BadParams, "Birch rank needs degree >= 2");
  const auto name = m == 1 ? InvariantName::Brk : InvariantName::CollectiveBrk;
  IdealPresentation ip;
  ip.field = ps[0].field();
  ip.blocks = ps[0].blocks();
  ip.order = MonomialOrder::degrevlex();
  for (auto& g : minors(jacobian(ps), m))
    if (!g.is_zero()) ip.generators.push_back(std::move(g));
  const int dim = ip.generators.empty() ? static_cast<int>(n) : ideal_dimension(buchberger(ip));
  const long brk = static_cast<long>(n) - dim;
  auto r = make_report(name, brk, brk, ps[0].field());
  r.certificates = {{"ambient", n}, {"nonzero_minors", ip.generators.size()}, {"dim_singular_locus", dim}};
  return r;
}

InvariantReport collective_birch(const std::vector<MultiPoly>& ps) {
  auto r = birch_rank(ps);
  r.name = InvariantName::CollectiveBrk;
  return r;
}

InvariantReport partition_rank_bounds(const Tensor& f) {
  MLV_REQUIRE(f.is_form(), ErrorCode::NotForm, "partition rank needs a multilinear form");
  MLV_REQUIRE(f.num_blocks() >= 2, ErrorCode::BadParams, "partition rank needs d >= 2");
  const auto gr = geometric_rank(f);
  long hi = LONG_MAX;
  std::vector<long> flat;
  for (std::size_t j = 0; j < f.num_blocks(); ++j) {
    flat.push_back(static_cast<long>(flattening_rank(f, j)));
    hi = std::min(hi, flat.back());
  }
  auto r = make_report(InvariantName::PR, gr.lo, hi, f.field());
  r.certificates = {{"gr", gr.certificates}, {"flattening_ranks", flat}};
  return r;
}

InvariantReport strength_bounds(const MultiPoly& p) {
  const FieldId f = p.field();
  if (p.is_zero()) {
    auto r = make_report(InvariantName::Strength, 0, 0, f);
    r.certificates = {{"zero", true}};
    return r;
  }
  MLV_REQUIRE(p.is_homogeneous(), ErrorCode::NotHomogeneous, "strength needs a homogeneous polynomial");
  const unsigned d = p.total_degree();
  MLV_REQUIRE(d >= 2, ErrorCode::BadParams, "strength needs degree >= 2");
  MLV_REQUIRE(f.is_rationals() || f.modulus() > d, ErrorCode::BadCharacteristic,
              "strength bounds need characteristic 0 or > " + std::to_string(d));
  const auto brk = birch_rank({p});
  const Tensor fp = polarize(p.with_blocks(VarBlocks::single(p.nvars())), d);
  const auto pr = partition_rank_bounds(fp);
  const auto c = theorem_constants(d, 1);
  const long binom = c.c_polar.get_si();
  std::vector<std::uint64_t> masks;
  for (const auto& t : p.terms()) masks.push_back(t.mono.support());
  const long cover = min_hitting_set(masks);
  const long lo = std::max(ceil_div(brk.lo, 2), ceil_div(pr.lo, binom));
  const long birch_hi = clamp_long(c.c_strbirch * brk.lo);
  const long hi = std::min({birch_hi, pr.hi, cover});
  auto r = make_report(InvariantName::Strength, lo, hi, f);
  r.certificates = {{"degree", d},          {"brk", brk.lo},     {"gr_polarization", pr.lo},
                    {"binom", binom},        {"pr_hi_polarization", pr.hi}, {"c_strbirch_bound", birch_hi},
                    {"variable_cover", cover}};
  return r;
}

InvariantReport collective_strength_bounds(const std::vector<MultiPoly>& ps, const StrengthOptions& opts) {
  unsigned degree = 0;
  check_polys(ps, degree);
  if (ps.size() == 1) {
    auto r = strength_bounds(ps[0]);
    r.name = InvariantName::CollectiveStrength;
    return r;
  }
  MLV_REQUIRE(degree >= 2, ErrorCode::BadParams, "collective strength needs degree >= 2");
  const FieldId f = ps[0].field();
  const std::size_t m = ps.size();
  const auto brk = collective_birch(ps);
  const auto c = theorem_constants(degree, static_cast<unsigned>(m));
  const long lo = ceil_div(brk.lo, 2);
  const long thm_hi = clamp_long(c.c_collective * (brk.lo + static_cast<long>(m) - 1));
  long span_hi = LONG_MAX;
  nlohmann::json combos = nlohmann::json::array();
  auto consider = [&](const std::vector<long>& a) {
    MultiPoly q(f, ps[0].blocks());
    for (std::size_t i = 0; i < m; ++i)
      if (a[i] != 0) q += Scalar(f, a[i]) * ps[i].with_blocks(ps[0].blocks());
    if (q.is_zero()) return;
    const long h = strength_bounds(q).hi;
    combos.push_back({{"coefficients", a}, {"strength_hi", h}});
    span_hi = std::min(span_hi, h);
  };
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<long> a(m, 0);
    a[i] = 1;
    consider(a);
  }
  Rng rng(Rng::derive(opts.seed, 0x5C));
  for (std::size_t k = 0; k < opts.span_samples; ++k) {
    std::vector<long> a(m);
    for (auto& x : a) x = rng.uniform(-3, 3);
    consider(a);
  }
  const long hi = std::min(thm_hi, span_hi);
  auto r = make_report(InvariantName::CollectiveStrength, lo, hi, f);
  r.certificates = {{"collective_brk", brk.lo}, {"theorem_bound", thm_hi}, {"span_combinations", combos}};
  return r;
}

ConstantsTable theorem_constants(unsigned d, unsigned m) {
  MLV_REQUIRE(d >= 2 && m >= 1, ErrorCode::BadParams, "constants need d >= 2 and m >= 1");
  ConstantsTable t;
  t.d = d;
  t.m = m;
  mpz_class pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 2, d - 1);
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), d, d / 2);
  t.c_pvsa = pow - 1;
  t.c_akz = 6 * t.c_pvsa;
  t.c_pvsg = 6 * t.c_pvsa * t.c_pvsa;
  t.c_polar = binom;
  t.c_strstab = t.c_akz * binom;
  t.c_strbirch = t.c_strstab * (d - 1);
  t.c_collective = t.c_strbirch * m;
  t.c_krull = 2 * pow * m;
  return t;
}

nlohmann::json constants_to_json(const ConstantsTable& t) {
  auto num = [](const mpz_class& z) { return z.fits_slong_p() ? nlohmann::json(z.get_si()) : nlohmann::json(z.get_str()); };
  return {{"schema", "1"},           {"d", t.d},
          {"m", t.m},                {"c_pvsa", num(t.c_pvsa)},
          {"c_akz", num(t.c_akz)},   {"c_pvsg", num(t.c_pvsg)},
          {"c_polar", num(t.c_polar)}, {"c_strstab", num(t.c_strstab)},
          {"c_strbirch", num(t.c_strbirch)}, {"c_collective", num(t.c_collective)},
          {"c_krull", num(t.c_krull)}};
}

}  // namespace mlv
