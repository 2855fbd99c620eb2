#pragma once

// Sufficiency of Markov kernels for finite families of distributions, and
// the battery that cross-checks fuzzy equivalence against sufficiency.
//
// Pairwise sufficiency is decided by Hellinger preservation; Blackwell
// sufficiency by a single feasibility problem for a common recovery kernel.

#include <cstdint>
#include <optional>
#include <vector>

#include "povcal/divergences.hpp"
#include "povcal/order.hpp"

namespace povcal {

struct PairwiseSufficiency {
  bool sufficient = false;
  double hellinger_source = 0.0;  ///< H(p, q)
  double hellinger_image = 0.0;   ///< H(nu p, nu q)
  double gap = 0.0;               ///< |H(p,q) - H(nu p, nu q)|
};

/// True iff the Hellinger distance survives nu within TOL_SUFF.
PairwiseSufficiency pairwise_sufficient(const MarkovKernel& nu, const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Uniform mixture of the family; its support is the union of supports.
Eigen::VectorXd dominating_mixture(const std::vector<Eigen::VectorXd>& family);

struct FamilySufficiency {
  bool sufficient = false;
  double max_gap = 0.0;
};

/// Conjunction of pairwise_sufficient(nu, p, p0) over the family, p0 the
/// dominating mixture.
FamilySufficiency sufficient_for_family(const MarkovKernel& nu, const std::vector<Eigen::VectorXd>& family);

struct BlackwellSufficiency {
  bool sufficient = false;
  /// Target -> source kernel with recovery(nu(p)) = p for the whole family,
  /// stochastic on the support of the image mixture.
  std::optional<WeakMarkovKernel> recovery;
};

BlackwellSufficiency blackwell_sufficient(const MarkovKernel& nu, const std::vector<Eigen::VectorXd>& family);

struct SufficiencyReport {
  // Sampled Hellinger checks only refute; their verdicts are evidence.
  bool pairwise = false;            ///< nu pairwise sufficient on sampled state pairs
  double pairwise_max_gap = 0.0;
  bool vs_mixture = false;          ///< Hellinger against the faithful reference state
  double vs_mixture_max_gap = 0.0;
  double hellinger_max_gap = 0.0;   ///< max of the two gaps above
  // Exact items.
  bool blackwell = false;           ///< over the spanning canonical state family
  bool fuzzy_equivalent = false;    ///< operator-level preorder both ways
  bool agree = false;               ///< blackwell == fuzzy_equivalent
  std::size_t sampled_states = 0;
  std::size_t canonical_states = 0;
  std::optional<WeakMarkovKernel> recovery;
  std::optional<MarkovKernel> backward_witness;
};

/// Requires smear(xi, nu) = eta within TOL_EQ (NotASmearing) and a faithful
/// reference state m0 (NotFaithful). Samples `n_states` random states from
/// `seed` in addition to the d^2 canonical states.
SufficiencyReport equivalence_battery(const Observable& xi, const Observable& eta, const MarkovKernel& nu,
                                      const State& m0, std::size_t n_states, std::uint64_t seed);

}  // namespace povcal
