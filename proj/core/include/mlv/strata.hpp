#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlv/groebner.hpp"
#include "mlv/poly_matrix.hpp"
#include "mlv/tensor.hpp"

namespace mlv {

/// Stratum W_r of the partial points (v_1..v_{d-1}) where the linear map in
/// the last block has rank exactly r, computed over the algebraic closure.
struct StratumResult {
  std::size_t r = 0;
  /// nullopt when the stratum is empty.
  std::optional<int> closure_codim;
  /// Saturating r-minor attaining the maximal dimension (absent for r = 0).
  std::optional<MultiPoly> witness;
  std::size_t saturations = 0;

  bool empty() const noexcept { return !closure_codim.has_value(); }
};

struct StratificationReport {
  std::vector<StratumResult> per_r;
  int total_codim = 0;
  std::size_t argmin_r = 0;
  int direct_codim = 0;
  bool agree = false;
  /// Violations of the expected codimension profile; informational only.
  std::vector<std::string> anomalies;
  /// Filled by verify_codim_formula when the two sides disagree.
  nlohmann::json diagnostics;
};

/// m x n_d matrix; entry (i, s) is the coefficient of x_{d,s} in component i,
/// a polynomial in the first d - 1 blocks. NotHomogeneous for affine input.
PolyMatrix coefficient_matrix(const Tensor& f);

/// Codimension, in the first d - 1 blocks, of the closure of W_r. For r >= 1
/// this is the ambient dimension minus the max over nonzero r-minors g of
/// dim (I_{r+1} : g^inf); r = 0 uses V(I_1).
StratumResult stratum_codim(const Tensor& f, std::size_t r);

/// min over nonempty strata of r + codim, alongside direct_codim.
StratificationReport codim_by_stratification(const Tensor& f);

/// Codimension of V(components) in the space of all blocks. The zero system has codimension 0.
int direct_codim(const Tensor& f);

/// Same as codim_by_stratification, attaching the system and per-stratum
/// data to diagnostics when the sides differ.
StratificationReport verify_codim_formula(const Tensor& f);

nlohmann::json stratification_to_json(const StratificationReport& rep);

}  // namespace mlv
