#include "mlv/strata.hpp"

#include <algorithm>

#include "mlv/poly_json.hpp"

namespace mlv {

namespace {

VarBlocks leading_blocks(const Tensor& f) {
  const std::size_t d = f.num_blocks();
  std::vector<std::size_t> sizes(f.blocks().sizes().begin(), f.blocks().sizes().begin() + static_cast<std::ptrdiff_t>(d - 1));
  return sizes.empty() ? VarBlocks() : VarBlocks(sizes);
}

IdealPresentation minors_ideal(const PolyMatrix& m, std::size_t k) {
  IdealPresentation ip;
  ip.field = m.field();
  ip.blocks = m.blocks();
  ip.order = MonomialOrder::degrevlex();
  if (k <= m.rows() && k <= m.cols())
    for (auto& g : minors(m, k))
      if (!g.is_zero()) ip.generators.push_back(std::move(g));
  return ip;
}

int dimension_of(const IdealPresentation& ip) {
  if (ip.generators.empty()) return static_cast<int>(ip.blocks.total());
  return ideal_dimension(buchberger(ip));
}

}  // namespace

PolyMatrix coefficient_matrix(const Tensor& f) {
  MLV_REQUIRE(f.num_blocks() >= 1, ErrorCode::ShapeMismatch, "coefficient matrix needs at least one block");
  MLV_REQUIRE(f.homogeneous(), ErrorCode::NotHomogeneous, "coefficient matrix needs a homogeneous map");
  const std::size_t d = f.num_blocks();
  const VarBlocks lead = leading_blocks(f);
  std::vector<std::vector<std::vector<Term>>> terms(f.m(), std::vector<std::vector<Term>>(f.size(d - 1)));
  f.for_each_index([&](std::span<const std::size_t> idx) {
    if (idx[d - 1] == 0) return;
    for (std::size_t o = 0; o < f.m(); ++o) {
      const Scalar& x = f.at(idx, o);
      if (x.is_zero()) continue;
      Monomial mono(lead.total());
      for (std::size_t j = 0; j + 1 < d; ++j) mono.set(lead.var(j, idx[j] - 1), 1);
      terms[o][idx[d - 1] - 1].push_back({mono, x});
    }
  });
  PolyMatrix mat(f.m(), f.size(d - 1), f.field(), lead);
  for (std::size_t o = 0; o < f.m(); ++o)
    for (std::size_t s = 0; s < f.size(d - 1); ++s)
      mat(o, s) = MultiPoly::from_terms(f.field(), lead, std::move(terms[o][s]));
  return mat;
}

StratumResult stratum_codim(const Tensor& f, std::size_t r) {
  const PolyMatrix mat = coefficient_matrix(f);
  MLV_REQUIRE(r <= std::min(mat.rows(), mat.cols()), ErrorCode::BadParams,
              "rank " + std::to_string(r) + " exceeds min(n_d, m)");
  const int ambient = static_cast<int>(mat.blocks().total());
  StratumResult res;
  res.r = r;
  const IdealPresentation next = minors_ideal(mat, r + 1);
  if (r == 0) {
    const int dim = dimension_of(next);
    if (dim >= 0) res.closure_codim = ambient - dim;
    return res;
  }
  // The closure of W_r lies in V(I_{r+1}), so its dimension bounds every saturation.
  const int ceiling = dimension_of(next);
  if (ceiling < 0) return res;
  int best = -1;
  for (auto& g : minors(mat, r)) {
    if (g.is_zero()) continue;
    ++res.saturations;
    const int dim = next.generators.empty() ? ambient : saturation_dimension(next, g);
    if (dim > best) {
      best = dim;
      res.witness = g;
    }
    if (best == ceiling) break;
  }
  if (best >= 0) res.closure_codim = ambient - best;
  return res;
}

int direct_codim(const Tensor& f) {
  const auto polys = tensor_to_polys(f);
  IdealPresentation ip;
  ip.field = f.field();
  ip.blocks = f.blocks();
  ip.order = MonomialOrder::degrevlex();
  for (const auto& p : polys)
    if (!p.is_zero()) ip.generators.push_back(p);
  if (ip.generators.empty()) return 0;
  const int dim = ideal_dimension(buchberger(ip));
  // An empty variety cannot occur for homogeneous input; report full codimension.
  return static_cast<int>(f.blocks().total()) - dim;
}

StratificationReport codim_by_stratification(const Tensor& f) {
  MLV_REQUIRE(f.homogeneous(), ErrorCode::NotHomogeneous, "stratification needs a homogeneous map");
  StratificationReport rep;
  const std::size_t top = std::min(f.m(), f.size(f.num_blocks() - 1));
  bool have = false;
  for (std::size_t r = 0; r <= top; ++r) {
    StratumResult s = stratum_codim(f, r);
    if (!s.empty()) {
      const int total = static_cast<int>(r) + *s.closure_codim;
      if (!have || total < rep.total_codim) {
        rep.total_codim = total;
        rep.argmin_r = r;
        have = true;
      }
    }
    rep.per_r.push_back(std::move(s));
  }
  // Expected profile: codim non-increasing over nonempty strata, all empty above the generic rank.
  std::optional<int> prev;
  bool seen_zero = false;
  for (const auto& s : rep.per_r) {
    if (s.empty()) continue;
    if (seen_zero) rep.anomalies.push_back("nonempty stratum r=" + std::to_string(s.r) + " above the generic rank");
    if (prev && *s.closure_codim > *prev)
      rep.anomalies.push_back("codim increases at r=" + std::to_string(s.r));
    prev = s.closure_codim;
    if (*s.closure_codim == 0) seen_zero = true;
  }
  rep.direct_codim = direct_codim(f);
  rep.agree = have && rep.total_codim == rep.direct_codim;
  return rep;
}

StratificationReport verify_codim_formula(const Tensor& f) {
  StratificationReport rep = codim_by_stratification(f);
  if (!rep.agree) {
    nlohmann::json d;
    d["system"] = tensor_to_json(f);
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& p : tensor_to_polys(f)) gens.push_back(poly_to_json(p));
    d["components"] = gens;
    const PolyMatrix mat = coefficient_matrix(f);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < mat.cols(); ++j) row.push_back(poly_to_json(mat(i, j)));
      rows.push_back(row);
    }
    d["coefficient_matrix"] = rows;
    rep.diagnostics = d;
  }
  return rep;
}

nlohmann::json stratification_to_json(const StratificationReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : rep.per_r) {
    nlohmann::json row{{"r", s.r}, {"saturations", s.saturations}};
    row["closure_codim"] = s.empty() ? nlohmann::json("empty") : nlohmann::json(*s.closure_codim);
    if (s.witness) row["witness"] = poly_to_json(*s.witness);
    rows.push_back(row);
  }
  nlohmann::json j{{"schema", "1"},
                   {"per_r", rows},
                   {"total_codim", rep.total_codim},
                   {"argmin_r", rep.argmin_r},
                   {"direct_codim", rep.direct_codim},
                   {"agree", rep.agree},
                   {"anomalies", rep.anomalies}};
  if (!rep.diagnostics.is_null()) j["diagnostics"] = rep.diagnostics;
  return j;
}

}  // namespace mlv
