// Independent checker for family proof objects. Uses only polynomial
// evaluation, eval_tensor and rank; none of the builder code.
#include <algorithm>

#include "mlv/error.hpp"
#include "mlv/families.hpp"
#include "mlv/poly_json.hpp"

namespace mlv {

namespace {

struct Dual {
  Scalar a, b;
};

struct CertStage {
  std::size_t block = 0;
  std::vector<std::size_t> rows, cols, free;
  std::vector<MultiPoly> nums;
  MultiPoly den;
};

struct ParsedCert {
  Tensor t;
  BlockPoint v;
  std::vector<Scalar> c;
  std::vector<CertStage> stages;
  std::size_t parameter_dim = 0;
};

std::vector<Scalar> read_scalars(FieldId f, const nlohmann::json& j) {
  MLV_REQUIRE(j.is_array(), ErrorCode::MalformedCert, "expected an array of scalars");
  std::vector<Scalar> out;
  for (const auto& e : j) out.push_back(scalar_from_json(f, e));
  return out;
}

ParsedCert parse(const nlohmann::json& j) {
  MLV_REQUIRE(j.is_object() && j.value("schema", "") == "1", ErrorCode::MalformedCert, "missing schema \"1\"");
  MLV_REQUIRE(j.value("kind", "") == "family-certificate", ErrorCode::MalformedCert, "not a family certificate");
  ParsedCert p;
  p.t = tensor_from_json(j.at("tensor"));
  const FieldId f = p.t.field();
  MLV_REQUIRE(f.is_rationals(), ErrorCode::MalformedCert, "certificates are over Q");
  const auto& vj = j.at("v");
  MLV_REQUIRE(vj.is_array() && vj.size() == p.t.num_blocks(), ErrorCode::MalformedCert, "v has the wrong block count");
  for (std::size_t b = 0; b < vj.size(); ++b) {
    p.v.push_back(read_scalars(f, vj[b]));
    MLV_REQUIRE(p.v.back().size() == p.t.size(b), ErrorCode::MalformedCert, "v block has the wrong size");
  }
  p.c = read_scalars(f, j.at("c"));
  MLV_REQUIRE(p.c.size() == p.t.m(), ErrorCode::MalformedCert, "c has the wrong length");
  const auto& fam = j.at("family");
  p.parameter_dim = fam.at("parameter_dim").get<std::size_t>();
  const std::size_t d = p.t.num_blocks();
  const auto& sj = fam.at("stages");
  MLV_REQUIRE(sj.is_array() && sj.size() == d, ErrorCode::MalformedCert, "one stage per block is required");
  auto sizes = p.t.blocks().sizes();
  auto ring_sizes = sizes;
  ring_sizes.insert(ring_sizes.end(), sizes.begin(), sizes.end());
  const VarBlocks ring(ring_sizes);
  for (std::size_t s = 0; s < d; ++s) {
    const auto& e = sj[s];
    CertStage st;
    st.block = e.at("block").get<std::size_t>();
    MLV_REQUIRE(st.block == s, ErrorCode::MalformedCert, "stages out of order");
    st.rows = e.at("rows").get<std::vector<std::size_t>>();
    st.cols = e.at("cols").get<std::vector<std::size_t>>();
    st.free = e.at("free").get<std::vector<std::size_t>>();
    for (const auto& n : e.at("numerators")) st.nums.push_back(poly_from_json(n));
    st.den = poly_from_json(e.at("denominator"));
    MLV_REQUIRE(st.nums.size() == sizes[s], ErrorCode::MalformedCert, "one numerator per coordinate");
    MLV_REQUIRE(st.den.blocks() == ring && st.den.field() == f, ErrorCode::MalformedCert, "formula ring mismatch");
    for (const auto& q : st.nums)
      MLV_REQUIRE(q.blocks() == ring && q.field() == f, ErrorCode::MalformedCert, "formula ring mismatch");
    p.stages.push_back(std::move(st));
  }
  return p;
}

/// Evaluates the formulas at params; false when a denominator vanishes.
bool evaluate_family(const ParsedCert& p, const std::vector<Scalar>& params, std::vector<Scalar>& x) {
  const auto& b = p.t.blocks();
  const std::size_t n = b.total();
  std::vector<Scalar> pt(2 * n, Scalar::zero(p.t.field()));
  std::size_t idx = 0;
  for (std::size_t s = 0; s < p.stages.size(); ++s)
    for (auto k : p.stages[s].free) pt[n + b.offset(s) + k] = params.at(idx++);
  for (std::size_t s = 0; s < p.stages.size(); ++s) {
    const auto& st = p.stages[s];
    const Scalar den = st.den.evaluate(pt);
    if (den.is_zero()) return false;
    for (std::size_t i = 0; i < st.nums.size(); ++i) pt[b.offset(s) + i] = st.nums[i].evaluate(pt) / den;
  }
  x.assign(pt.begin(), pt.begin() + static_cast<std::ptrdiff_t>(n));
  return true;
}

Dual eval_dual(const MultiPoly& q, const std::vector<Dual>& pt) {
  const FieldId f = q.field();
  Dual acc{Scalar::zero(f), Scalar::zero(f)};
  for (const auto& t : q.terms()) {
    Dual term{t.coef, Scalar::zero(f)};
    for (std::size_t i = 0; i < q.nvars(); ++i) {
      for (unsigned e = 0; e < t.mono[i]; ++e) {
        term = Dual{term.a * pt[i].a, term.a * pt[i].b + term.b * pt[i].a};
      }
    }
    acc.a += term.a;
    acc.b += term.b;
  }
  return acc;
}

/// Jacobian column c by first-order forward evaluation along e_c.
ScalarMatrix dual_jacobian(const ParsedCert& p, const std::vector<Scalar>& params) {
  const auto& b = p.t.blocks();
  const std::size_t n = b.total();
  const FieldId f = p.t.field();
  ScalarMatrix jac(n, params.size(), f);
  for (std::size_t c = 0; c < params.size(); ++c) {
    std::vector<Dual> pt(2 * n, Dual{Scalar::zero(f), Scalar::zero(f)});
    std::size_t idx = 0;
    for (std::size_t s = 0; s < p.stages.size(); ++s)
      for (auto k : p.stages[s].free) {
        pt[n + b.offset(s) + k] = Dual{params[idx], Scalar(f, idx == c ? 1 : 0)};
        ++idx;
      }
    for (std::size_t s = 0; s < p.stages.size(); ++s) {
      const auto& st = p.stages[s];
      const Dual den = eval_dual(st.den, pt);
      MLV_REQUIRE(!den.a.is_zero(), ErrorCode::PivotDenominatorZero, "Jacobian sample is off the chart");
      const Scalar inv = invert(den.a);
      for (std::size_t i = 0; i < st.nums.size(); ++i) {
        const Dual num = eval_dual(st.nums[i], pt);
        const Scalar val = num.a * inv;
        pt[b.offset(s) + i] = Dual{val, (num.b - val * den.b) * inv};
      }
    }
    for (std::size_t r = 0; r < n; ++r) jac(r, c) = pt[r].b;
  }
  return jac;
}

bool all_shifted_vanish(const ParsedCert& p, const std::vector<Scalar>& x) {
  const auto xb = split_point(p.t.blocks(), x);
  const std::size_t d = p.t.num_blocks();
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    BlockPoint y = p.v;
    for (std::size_t s = 0; s < d; ++s)
      if (!(mask >> s & 1u))
        for (std::size_t i = 0; i < y[s].size(); ++i) y[s][i] += xb[s][i];
    const auto val = eval_tensor(p.t, y);
    for (std::size_t j = 0; j < val.size(); ++j)
      if (val[j] != p.c[j]) return false;
  }
  return true;
}

}  // namespace

CertCheckReport check_certificate(const nlohmann::json& j) {
  CertCheckReport rep;
  ParsedCert p;
  nlohmann::json checks;
  try {
    p = parse(j);
    checks = j.at("checks");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedCert, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedCert) throw;
    fail(ErrorCode::MalformedCert, e.what());
  }
  auto failure = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };
  const FieldId f = p.t.field();
  const auto& b = p.t.blocks();
  const std::size_t d = b.num_blocks();

  try {
    if (eval_tensor(p.t, p.v) != p.c) failure("base point does not solve f(v) = c");

    std::size_t params = 0;
    for (std::size_t s = 0; s < d; ++s) {
      const auto& st = p.stages[s];
      const std::size_t n = b.size(s);
      std::vector<std::size_t> all = st.cols;
      all.insert(all.end(), st.free.begin(), st.free.end());
      std::sort(all.begin(), all.end());
      bool partition = st.rows.size() == st.cols.size() && all.size() == n;
      for (std::size_t i = 0; partition && i < n; ++i) partition = all[i] == i;
      if (!partition) failure("stage " + std::to_string(s) + ": pivot and free columns do not partition the block");
      std::uint64_t xmask = 0;
      for (std::size_t i = 0; i < b.offset(s); ++i) xmask |= std::uint64_t{1} << i;
      std::uint64_t tmask = xmask;
      for (auto k : st.free)
        if (k < n) tmask |= std::uint64_t{1} << (b.total() + b.offset(s) + k);
      if ((st.den.support() & ~xmask) != 0) failure("stage " + std::to_string(s) + ": denominator uses later variables");
      for (const auto& q : st.nums)
        if ((q.support() & ~tmask) != 0) failure("stage " + std::to_string(s) + ": numerator uses foreign variables");
      params += st.free.size();
    }
    if (params != p.parameter_dim) failure("parameter_dim does not match the free columns");

    const long bound = static_cast<long>(p.t.m()) << d;
    if (checks.at("codim_bound").get<long>() != bound) failure("codim_bound is not 2^d m");
    if (checks.at("ambient_dim").get<std::size_t>() != b.total()) failure("ambient_dim mismatch");
    if (checks.at("parameter_dim").get<std::size_t>() != p.parameter_dim) failure("parameter_dim mismatch");

    auto read_params = [&](const nlohmann::json& e) {
      auto v = read_scalars(f, e);
      MLV_REQUIRE(v.size() == p.parameter_dim, ErrorCode::MalformedCert, "sample has the wrong parameter count");
      return v;
    };

    bool vanishing = !checks.at("vanishing").empty();
    for (const auto& e : checks.at("vanishing")) {
      std::vector<Scalar> x;
      if (!evaluate_family(p, read_params(e.at("params")), x)) {
        failure("vanishing sample is off the chart");
        vanishing = false;
      } else if (read_scalars(f, e.at("point")) != x) {
        failure("recorded sample point differs from the family formulas");
        vanishing = false;
      } else if (!all_shifted_vanish(p, x)) {
        failure("a shifted function is nonzero at a family point");
        vanishing = false;
      }
    }
    bool scaling = !checks.at("scaling").empty();
    for (const auto& e : checks.at("scaling")) {
      const Scalar lambda = scalar_from_json(f, e.at("lambda"));
      std::vector<Scalar> x;
      if (lambda.is_zero() || !evaluate_family(p, read_params(e.at("params")), x)) {
        failure("invalid scaling trial");
        scaling = false;
        continue;
      }
      for (auto& c : x) c *= lambda;
      if (!all_shifted_vanish(p, x)) {
        failure("a shifted function is nonzero at a scaled family point");
        scaling = false;
      }
    }

    const auto jp = read_params(checks.at("jacobian_params"));
    std::vector<Scalar> tmp;
    if (!evaluate_family(p, jp, tmp)) {
      failure("Jacobian sample is off the chart");
    } else {
      rep.jac_rank = rank(dual_jacobian(p, jp));
      if (rep.jac_rank != checks.at("jac_rank").get<std::size_t>())
        failure("claimed jac_rank " + checks.at("jac_rank").dump() + " but recomputed " + std::to_string(rep.jac_rank));
    }

    const std::string method = checks.at("base_point_method").get<std::string>();
    bool base = false;
    std::vector<Scalar> x0;
    const bool defined = evaluate_family(p, std::vector<Scalar>(p.parameter_dim, Scalar::zero(f)), x0);
    if (method == "eval") {
      base = defined && std::all_of(x0.begin(), x0.end(), [](const Scalar& c) { return c.is_zero(); });
      if (!base) failure("the family does not pass through the base point at parameters 0");
    } else if (method == "cone") {
      base = scaling;
      if (!base) failure("cone base point needs passing scaling trials");
    } else {
      failure("unknown base point method");
    }

    const long need = static_cast<long>(b.total()) - bound;
    const bool verdict = vanishing && scaling && base && static_cast<long>(rep.jac_rank) >= need && rep.failures.empty();
    if (checks.at("verdict").get<bool>() != verdict) failure("claimed verdict disagrees with the recomputed one");
    if (!verdict) failure("recomputed verdict is false");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedCert, e.what());
  }
  rep.ok = rep.failures.empty();
  return rep;
}

}  // namespace mlv
