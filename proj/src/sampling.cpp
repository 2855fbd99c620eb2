#include "povcal/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace povcal {

namespace {

CMatrix ginibre(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = {re, im};
    }
  return g;
}

CMatrix hermitian_part(const CMatrix& a) { return (a + a.adjoint()) / 2.0; }

}  // namespace

CMatrix random_unitary(Rng& rng, Index d) {
  const CMatrix g = ginibre(rng, d, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double m = std::abs(r(j, j));
    if (m > 0.0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

State random_density(Rng& rng, Index d) {
  const CMatrix g = ginibre(rng, d, d);
  CMatrix rho = hermitian_part(g * g.adjoint());
  rho /= rho.trace().real();
  return State::density(std::move(rho));
}

State random_pure_state(Rng& rng, Index d) {
  CMatrix v = ginibre(rng, d, 1);
  v /= v.norm();
  return State::density(hermitian_part(v * v.adjoint()));
}

Effect random_effect(Rng& rng, Index d, double lo, double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  const CMatrix u = random_unitary(rng, d);
  Eigen::VectorXcd diag(d);
  for (Index i = 0; i < d; ++i) diag(i) = unif(rng);
  return Effect::hilbert(hermitian_part(u * diag.asDiagonal() * u.adjoint()));
}

Effect random_tribe_effect(Rng& rng, Index n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd f(n);
  for (Index i = 0; i < n; ++i) f(i) = unif(rng);
  return Effect::tribe(std::move(f));
}

Eigen::VectorXd random_probability(Rng& rng, Index n) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd p(n);
  for (Index i = 0; i < n; ++i) p(i) = expo(rng) + 1e-12;
  return p / p.sum();
}

MarkovKernel random_kernel(Rng& rng, Index source_size, Index target_size) {
  Eigen::MatrixXd rows(source_size, target_size);
  for (Index i = 0; i < source_size; ++i) rows.row(i) = random_probability(rng, target_size).transpose();
  return MarkovKernel(std::move(rows));
}

MarkovKernel random_permutation(Rng& rng, Index n) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return deterministic_kernel(perm, n);
}

Observable random_povm(Rng& rng, Index d, Index k, Index rank) {
  if (k * rank < d)
    throw Error(Errc::InvalidAtom, "random_povm: " + std::to_string(k) + " atoms of rank " + std::to_string(rank) +
                                       " cannot sum to the identity in dimension " + std::to_string(d));
  std::vector<CMatrix> raw;
  CMatrix total = CMatrix::Zero(d, d);
  for (Index i = 0; i < k; ++i) {
    const CMatrix g = ginibre(rng, d, rank);
    raw.push_back(hermitian_part(g * g.adjoint()));
    total += raw.back();
  }
  const auto dec = eig_h(hermitian_part(total));
  const Eigen::VectorXd inv_sqrt = dec.eigenvalues.cwiseSqrt().cwiseInverse();
  const CMatrix s = dec.vectors * inv_sqrt.cast<std::complex<double>>().asDiagonal() * dec.vectors.adjoint();
  std::vector<Effect> atoms;
  for (const auto& a : raw) atoms.push_back(Effect::hilbert(hermitian_part(s * a * s)));
  return make_observable(std::move(atoms));
}

Observable random_pvm(Rng& rng, Index d, Index parts) {
  parts = std::clamp<Index>(parts, 1, d);
  // Cut points: parts - 1 distinct positions among 1..d-1.
  std::vector<Index> cuts(static_cast<std::size_t>(d - 1));
  std::iota(cuts.begin(), cuts.end(), Index{1});
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(parts - 1));
  cuts.push_back(0);
  cuts.push_back(d);
  std::sort(cuts.begin(), cuts.end());

  const CMatrix u = random_unitary(rng, d);
  std::vector<Effect> atoms;
  for (std::size_t g = 0; g + 1 < cuts.size(); ++g) {
    const auto block = u.middleCols(cuts[g], cuts[g + 1] - cuts[g]);
    atoms.push_back(Effect::hilbert(hermitian_part(block * block.adjoint())));
  }
  return make_observable(std::move(atoms));
}

Effect random_projection(Rng& rng, Index d, Index r) {
  const CMatrix u = random_unitary(rng, d);
  const auto block = u.leftCols(r);
  return Effect::hilbert(hermitian_part(block * block.adjoint()));
}

std::vector<State> canonical_states(Index d) {
  const double dd = static_cast<double>(d);
  const CMatrix mixed = CMatrix::Identity(d, d) / dd;
  std::vector<CMatrix> basis;
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      CMatrix sym = CMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      basis.push_back(sym);
      CMatrix anti = CMatrix::Zero(d, d);
      anti(j, k) = {0.0, -1.0};
      anti(k, j) = {0.0, 1.0};
      basis.push_back(anti);
    }
  for (Index k = 0; k + 1 < d; ++k) {
    CMatrix diag = CMatrix::Zero(d, d);
    diag(k, k) = 1.0;
    diag(k + 1, k + 1) = -1.0;
    basis.push_back(diag);
  }
  std::vector<State> out{State::density(mixed)};
  for (const auto& h : basis) out.push_back(State::density(mixed + h / (2.0 * dd)));
  return out;
}

}  // namespace povcal
