#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "mlv/multipoly.hpp"
#include "mlv/tensor.hpp"

namespace mlv {

enum class InvariantName { GR, AR, Brk, PR, Strength, CollectiveBrk, CollectiveStrength };
std::string_view to_string(InvariantName n);

/// Exact values are intervals with lo = hi.
struct InvariantReport {
  InvariantName name = InvariantName::GR;
  long lo = 0;
  long hi = 0;
  FieldId field;
  nlohmann::json certificates = nlohmann::json::object();
  /// Wall-clock data; never part of the canonical JSON.
  nlohmann::json timings = nlohmann::json::object();

  bool exact() const noexcept { return lo == hi; }
};

/// {"schema":"1","name",...,"lo","hi","exact","field","certificates"}.
nlohmann::json report_to_json(const InvariantReport& r);

/// Forms: codim of the slice system against slice_block (default: last block).
/// With all_slicings every block is used and CheckFailed is raised if they
/// differ. Maps (m > 1): codimension of the map's own zero set.
InvariantReport geometric_rank(const Tensor& f, std::optional<std::size_t> slice_block = {}, bool all_slicings = false);

struct ArOptions {
  /// Kernel-chart and random candidate base points, beyond the block-zero ones.
  std::size_t point_budget = 6;
  std::uint64_t seed = 0;
  std::size_t cert_trials = 5;
};

/// [GR, N - max jac_rank] over families through rational points of the
/// variety: the slice system for forms, the map itself otherwise.
/// FiniteFieldUnsupported over F_p.
InvariantReport analytic_rank_bounds(const Tensor& f, const ArOptions& opts = {});

/// n minus the dimension of the m x m minors of the Jacobian. Brk for one
/// polynomial, CollectiveBrk for several. TooManyPolynomials if m > n.
InvariantReport birch_rank(const std::vector<MultiPoly>& ps);

/// [GR, min flattening rank]. NotForm unless f is a form.
InvariantReport partition_rank_bounds(const Tensor& f);

/// lo = max(ceil(Brk / 2), ceil(GR(f_P) / binom(d, d/2)));
/// hi = min(c_strbirch Brk, PR upper bound of f_P, variable cover of the support).
InvariantReport strength_bounds(const MultiPoly& p);

InvariantReport collective_birch(const std::vector<MultiPoly>& ps);

struct StrengthOptions {
  std::size_t span_samples = 6;
  std::uint64_t seed = 0;
};
/// [ceil(Brk / 2), min(c_collective (Brk + m - 1), strength upper bounds over the span)].
InvariantReport collective_strength_bounds(const std::vector<MultiPoly>& ps, const StrengthOptions& opts = {});

struct ConstantsTable {
  unsigned d = 2;
  unsigned m = 1;
  mpz_class c_pvsa, c_akz, c_pvsg, c_polar, c_strstab, c_strbirch, c_collective, c_krull;
};
/// BadParams unless d >= 2 and m >= 1.
ConstantsTable theorem_constants(unsigned d, unsigned m);
nlohmann::json constants_to_json(const ConstantsTable& t);

struct SuiteOptions {
  std::string name;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  /// Upper bounds on block sizes; empty means the suite default.
  std::vector<std::size_t> shape;
  std::optional<FieldId> field;
  std::optional<std::size_t> d, m;
  std::optional<std::size_t> only_trial;
};

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  bool skipped = false;
  nlohmann::json detail;
  std::string repro;
};

struct SuiteReport {
  std::string name;
  std::vector<TrialResult> trials;
  /// The falsified fixture and whether the suite's check rejected it.
  std::string control;
  bool control_rejected = false;

  std::size_t passed() const;
  std::size_t failed() const;
  bool ok() const { return failed() == 0 && control_rejected; }
};

std::vector<std::string> suite_names();
/// UnknownSuite for an unrecognised name. Trial failures are data, not errors.
SuiteReport run_suite(const SuiteOptions& opts);
nlohmann::json suite_to_json(const SuiteReport& r);

}  // namespace mlv
