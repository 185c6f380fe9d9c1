#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlv/linalg.hpp"
#include "mlv/multipoly.hpp"
#include "mlv/tensor.hpp"

namespace mlv {

/// Pivot rows I and columns J of a rank-r chart, both increasing.
struct FixedRankChart {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  std::size_t r() const noexcept { return rows.size(); }
  /// Columns outside J, increasing.
  std::vector<std::size_t> free_cols(std::size_t n) const;
};

/// Kernel vector with free block w and v_J = -M_1^{-1} M_2 w, where
/// M_1 = M[I, J] and M_2 = M[I, free]. SingularPivot if det M_1 = 0.
std::vector<Scalar> psi_chart_solve(const ScalarMatrix& m, const std::vector<Scalar>& w, const FixedRankChart& chart);

struct ChartProjection {
  ScalarMatrix matrix;
  std::vector<Scalar> free;
};
ChartProjection phi_project(const ScalarMatrix& m, const std::vector<Scalar>& v, const FixedRankChart& chart);

/// (j, I) with I a bitmask over blocks: bit i set means block i is held at v_i.
struct ConstraintId {
  std::size_t j = 0;
  std::uint32_t fixed = 0;
};

/// The 2^d m shifted functions f_{j,I}(x) = f_j(y) - c_j with y_i = v_i + x_i
/// off I and y_i = v_i on I, as polynomials in the tensor's block ring.
struct ShiftedSystem {
  Tensor system;
  BlockPoint v;
  std::vector<Scalar> c;
  std::vector<ConstraintId> ids;
  std::vector<MultiPoly> functions;
  /// Smallest s with mdeg <= (1..1, 0..0) with s ones; 0 for the zero function.
  std::vector<std::size_t> stage_class;

  const MultiPoly& function(std::size_t j, std::uint32_t fixed) const;
};

/// NotASolution unless eval_tensor(system, v) = c.
ShiftedSystem shifted_system(const Tensor& system, const BlockPoint& v, const std::vector<Scalar>& c);

/// Stage for block s. Formulas live in the family ring (x blocks then t blocks,
/// both shaped like the tensor): coordinate i of block s is
/// numerators[i] / denominator, a function of x_0..x_{s-1} and t_s at the free columns.
struct FamilyStage {
  std::size_t block = 0;
  /// Indices into ShiftedSystem::ids of the class s + 1 functions.
  std::vector<std::size_t> constraints;
  FixedRankChart chart;
  std::vector<std::size_t> free;
  std::vector<MultiPoly> numerators;
  MultiPoly denominator;
  /// det M[I, J] on the previous blocks; 1 when r = 0.
  MultiPoly pivot_minor;
  /// Family parameters (stages before s) at which the pivot minor is nonzero.
  std::vector<Scalar> sample_params;
  std::size_t attempts = 0;
};

struct RationalFamily {
  FieldId field;
  VarBlocks blocks;
  VarBlocks ring;
  BlockPoint v;
  std::size_t parameter_dim = 0;
  std::vector<FamilyStage> stages;

  std::size_t ambient_dim() const noexcept { return blocks.total(); }
  /// Offset of stage s parameters in the parameter vector.
  std::size_t param_offset(std::size_t s) const;
};

struct FamilyOptions {
  std::size_t attempts = 20;
  int initial_height = 16;
  std::size_t rank_samples = 4;
  std::size_t soundness_trials = 20;
};

/// FiniteFieldUnsupported over F_p; DegenerateSampling when a stage finds no
/// valid sample within the attempt budget.
RationalFamily build_family(const ShiftedSystem& s, Rng& rng, const FamilyOptions& opts = {});

/// Shifted coordinates x of the family point; PivotDenominatorZero off the chart.
BlockPoint family_eval_shifted(const RationalFamily& w, const std::vector<Scalar>& params);
/// Ambient point v + x.
BlockPoint family_eval(const RationalFamily& w, const std::vector<Scalar>& params);

/// ambient_dim x parameter_dim Jacobian of params -> x at params.
ScalarMatrix family_jacobian(const RationalFamily& w, const std::vector<Scalar>& params);
std::size_t family_jacobian_rank(const RationalFamily& w, const std::vector<Scalar>& params);

/// Integer parameters in [-height, height] where the family is defined.
std::vector<Scalar> sample_family_params(const RationalFamily& w, Rng& rng, int height = 16, std::size_t attempts = 20);

struct ScalingTrial {
  std::vector<Scalar> params;
  Scalar lambda;
};

struct FamilyCertificate {
  std::size_t jac_rank = 0;
  std::size_t parameter_dim = 0;
  std::size_t ambient_dim = 0;
  std::size_t vanishing_trials = 0;
  std::size_t scaling_trials = 0;
  long codim_bound = 0;
  bool vanishing_ok = false;
  bool scaling_ok = false;
  bool base_point_ok = false;
  /// "eval": the family passes through the shifted origin; "cone": some pivot
  /// vanishes at 0 and the base point is in the closure by scaling.
  std::string base_point_method;
  bool irreducibility_checked = false;
  bool verdict = false;

  std::vector<std::vector<Scalar>> vanishing_samples;
  std::vector<ScalingTrial> scaling_samples;
  std::vector<Scalar> jacobian_params;
};

/// Random point with F(v) = 0: integer entries on the first d - 1 blocks and a
/// random kernel vector of the remaining linear map. NotHomogeneous for affine input.
BlockPoint random_rational_solution(const Tensor& t, Rng& rng, int height = 5);

RationalFamily build_family_through(const Tensor& system, const BlockPoint& v, Rng& rng);

FamilyCertificate certify_family(const RationalFamily& w, const ShiftedSystem& s, std::size_t trials, Rng& rng);

nlohmann::json family_to_json(const RationalFamily& w);
/// Proof object: the system, base point, targets, family data and check transcript.
nlohmann::json certificate_to_json(const ShiftedSystem& s, const RationalFamily& w, const FamilyCertificate& cert);

struct CertCheckReport {
  bool ok = false;
  std::size_t jac_rank = 0;
  std::vector<std::string> failures;
};

/// Recomputes every claim of a proof object from its data using only
/// evaluation and exact linear algebra. MalformedCert for structural errors.
CertCheckReport check_certificate(const nlohmann::json& cert);

}  // namespace mlv
