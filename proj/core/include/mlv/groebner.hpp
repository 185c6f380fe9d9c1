#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mlv/multipoly.hpp"

namespace mlv {

struct IdealPresentation {
  std::vector<MultiPoly> generators;
  MonomialOrder order;
  /// Ring of the ideal; needed when there are no generators.
  FieldId field;
  VarBlocks blocks;

  static IdealPresentation of(std::vector<MultiPoly> gens, MonomialOrder order = MonomialOrder::degrevlex());
};

struct GroebnerBasis {
  std::vector<MultiPoly> basis;  // sorted by ascending leading monomial
  MonomialOrder order;
  bool reduced = true;
  FieldId field;
  VarBlocks blocks;
};

struct GroebnerOptions {
  std::uint64_t step_budget = 2'000'000;
  std::uint64_t bit_budget = 10'000;
  /// One line per S-pair when set.
  std::ostream* trace = nullptr;
};

/// Process-wide defaults used when no options are passed.
GroebnerOptions default_groebner_options();
void set_default_groebner_options(const GroebnerOptions& opts);

/// Reduced Groebner basis. Pairs are processed by the normal strategy: the
/// pair whose lcm is smallest under the order, ties broken by creation index.
/// Zero generators are ignored. ResourceLimit when a budget is exceeded.
GroebnerBasis buchberger(const IdealPresentation& ideal);
GroebnerBasis buchberger(const IdealPresentation& ideal, const GroebnerOptions& opts);

/// Full remainder of p by G.
MultiPoly normal_form(const MultiPoly& p, const GroebnerBasis& g);

bool is_trivial_ideal(const GroebnerBasis& g);

/// Krull dimension of K[x]/<G>; -1 for the unit ideal. G must be degrevlex.
int ideal_dimension(const GroebnerBasis& g);

/// Reduced degrevlex basis of I : g^infinity.
GroebnerBasis saturate_basis(const IdealPresentation& ideal, const MultiPoly& g);
GroebnerBasis saturate_basis(const IdealPresentation& ideal, const MultiPoly& g, const GroebnerOptions& opts);
IdealPresentation saturate(const IdealPresentation& ideal, const MultiPoly& g);
/// dim of I : g^infinity from a degrevlex basis of <I, tg - 1>, without elimination.
int saturation_dimension(const IdealPresentation& ideal, const MultiPoly& g);
int saturation_dimension(const IdealPresentation& ideal, const MultiPoly& g, const GroebnerOptions& opts);

/// Size of a smallest variable set meeting every mask (bit i = variable i).
/// Returns -1 when some mask is empty.
int min_hitting_set(std::vector<std::uint64_t> masks);

}  // namespace mlv
