#pragma once

// Seeded random instances: unitaries, states, effects, POVMs, kernels.
// All generators draw from a caller-owned std::mt19937_64.

#include <random>
#include <vector>

#include "povcal/kernels.hpp"

namespace povcal {

using Rng = std::mt19937_64;

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
CMatrix random_unitary(Rng& rng, Index d);
/// G G* / tr(G G*) for a d x d complex Ginibre G; full rank almost surely.
State random_density(Rng& rng, Index d);
/// Pure state |psi><psi|.
State random_pure_state(Rng& rng, Index d);
/// U diag(u) U* with u uniform in [lo, hi].
Effect random_effect(Rng& rng, Index d, double lo = 0.0, double hi = 1.0);
/// Uniform fuzzy set in [0,1]^n.
Effect random_tribe_effect(Rng& rng, Index n);

/// Dirichlet(1) vector; full support almost surely.
Eigen::VectorXd random_probability(Rng& rng, Index n);
/// Rows drawn from Dirichlet(1).
MarkovKernel random_kernel(Rng& rng, Index source_size, Index target_size);
/// Random permutation kernel.
MarkovKernel random_permutation(Rng& rng, Index n);

/// k atoms S^{-1/2} G_i G_i* S^{-1/2}, G_i complex Ginibre d x rank.
/// Needs k * rank >= d (InvalidAtom otherwise).
Observable random_povm(Rng& rng, Index d, Index k, Index rank);
/// PVM from a random unitary whose columns are split into `parts` nonempty
/// consecutive groups of random sizes.
Observable random_pvm(Rng& rng, Index d, Index parts);
/// A random projection of rank r.
Effect random_projection(Rng& rng, Index d, Index r);

/// I/d plus the d^2 - 1 states I/d + H_b / (2d) for a traceless Hermitian
/// basis H_b with operator norm one. Spans the Hermitian matrices; every
/// eigenvalue is at least 1/(2d).
std::vector<State> canonical_states(Index d);

}  // namespace povcal
