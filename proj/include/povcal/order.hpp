#pragma once

// The smearing preorder on observables. xi <= eta ("eta is a fuzzy version
// of xi") when eta(y_j) = sum_i nu_ij xi(x_i) for some Markov kernel nu.

#include <optional>

#include "povcal/feasibility.hpp"
#include "povcal/kernels.hpp"

namespace povcal {

struct PreorderWitness {
  bool holds = false;
  std::optional<MarkovKernel> witness;  ///< nu with smear(xi, nu) = eta, when holds
  double residual = 0.0;                ///< max atom sup-norm defect of smear(xi, witness)
};

/// Decides xi <= eta with one feasibility problem: each target atom gives
/// d^2 (hilbert) or n (tribe) real equations, each kernel row sums to one.
PreorderWitness preorder_leq(const Observable& xi, const Observable& eta);

struct FuzzyEquivalence {
  bool equivalent = false;
  PreorderWitness forward;   ///< xi <= eta
  PreorderWitness backward;  ///< eta <= xi
};

FuzzyEquivalence fuzzy_equivalent(const Observable& xi, const Observable& eta);

/// Spectral splitting of every atom into rank-one pieces.
struct RankOneRefinement {
  Observable xi;  ///< labels 0, 1, ... in (atom, eigenvalue) order
  LabelMap f;     ///< pushforward(xi, f) == eta
};

/// Splits each atom A_i = sum_j a_ij P_ij of a hilbert observable into the
/// rank-one effects a_ij P_ij (eigenvalues <= TOL_EQ / 2 dropped). A zero atom
/// keeps a single zero piece so every label of eta has a preimage.
RankOneRefinement rank_one_refinement(const Observable& eta);

struct CleanReport {
  bool clean = false;
  /// Filled in witness mode.
  std::optional<RankOneRefinement> refinement;
  std::optional<bool> refinement_below;  ///< refinement <= eta
  std::optional<bool> eta_below;         ///< eta <= refinement
};

/// Clean iff every nonzero atom has rank one (eigenvalues > 1e-7 count).
/// With `witness`, also reports the refinement and both preorder verdicts.
CleanReport is_clean(const Observable& eta, bool witness = false);

struct TwoValuedCoefficients {
  double t = 0.0;
  double s = 0.0;
};

/// E^B <= E^A iff A = t B + s B' for some t, s in [0,1]. Returns (t, s).
std::optional<TwoValuedCoefficients> two_valued_leq(const Effect& b, const Effect& a);

/// E^A is minimal among 1-0 observables iff ||A|| = ||A'|| = 1.
bool two_valued_is_minimal(const Effect& a);

/// A sharp observable xi and kernel nu with smear(xi, nu) = eta.
struct PvmMother {
  Observable xi;
  MarkovKernel nu;
};

/// nullopt when some pair of atoms of eta does not commute.
std::optional<PvmMother> pvm_mother(const Observable& eta);

/// For a 0-1 kernel with smear(xi, nu) = eta, checks that every eta atom is
/// xi(S_j) with S_j = { i : nu_ij = 1 }. Errors: NotASmearing, NotDeterministicKernel.
bool range_inclusion_check(const Observable& xi, const Observable& eta, const MarkovKernel& nu);

}  // namespace povcal
