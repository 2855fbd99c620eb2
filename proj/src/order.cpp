#include "povcal/order.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace povcal {

namespace {

void require_same_algebra(const Observable& a, const Observable& b, const char* who) {
  if (a.backend() != b.backend())
    throw Error(Errc::BackendMismatch, std::string(who) + ": observables live on different backends");
  if (a.dim() != b.dim())
    throw Error(Errc::DimMismatch, std::string(who) + ": dimensions " + std::to_string(a.dim()) + " and " +
                                       std::to_string(b.dim()));
}

void require_hilbert(const Observable& eta, const char* who) {
  if (eta.backend() != Backend::hilbert)
    throw Error(Errc::BackendMismatch, std::string(who) + ": needs a hilbert observable");
}

MarkovKernel kernel_from_solution(const Eigen::VectorXd& x, Index rows, Index cols) {
  Eigen::MatrixXd nu(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) nu(i, j) = std::clamp(x(i * cols + j), 0.0, 1.0);
  for (Index i = 0; i < rows; ++i) nu.row(i) /= nu.row(i).sum();
  return MarkovKernel(std::move(nu));
}

}  // namespace

PreorderWitness preorder_leq(const Observable& xi, const Observable& eta) {
  require_same_algebra(xi, eta, "preorder_leq");
  const auto k = static_cast<Index>(xi.size());
  const auto l = static_cast<Index>(eta.size());

  std::vector<Eigen::VectorXd> source;
  source.reserve(xi.size());
  for (const auto& a : xi.atoms()) source.push_back(real_coordinates(a));
  const Index coords = source.front().size();

  FeasibilityProblem lp;
  lp.equalities = Eigen::MatrixXd::Zero(l * coords, k * l);
  lp.rhs.resize(l * coords);
  for (Index j = 0; j < l; ++j) {
    const Eigen::VectorXd target = real_coordinates(eta.atom(static_cast<std::size_t>(j)));
    lp.rhs.segment(j * coords, coords) = target;
    for (Index i = 0; i < k; ++i)
      lp.equalities.block(j * coords, i * l + j, coords, 1) = source[static_cast<std::size_t>(i)];
  }
  for (Index i = 0; i < k; ++i) {
    std::vector<Index> row(static_cast<std::size_t>(l));
    for (Index j = 0; j < l; ++j) row[static_cast<std::size_t>(j)] = i * l + j;
    lp.simplex_groups.push_back(std::move(row));
  }

  const FeasibilityResult sol = solve_feasibility(lp);
  PreorderWitness out;
  if (!sol.feasible()) return out;
  MarkovKernel nu = kernel_from_solution(sol.x, k, l);
  out.residual = atom_distance(smear(xi, nu, eta.labels()), eta);
  out.holds = true;
  out.witness = std::move(nu);
  return out;
}

FuzzyEquivalence fuzzy_equivalent(const Observable& xi, const Observable& eta) {
  FuzzyEquivalence out;
  out.forward = preorder_leq(xi, eta);
  out.backward = preorder_leq(eta, xi);
  out.equivalent = out.forward.holds && out.backward.holds;
  return out;
}

RankOneRefinement rank_one_refinement(const Observable& eta) {
  require_hilbert(eta, "rank_one_refinement");
  const double drop = tolerances().eq / 2.0;
  const Index d = eta.dim();
  std::vector<Effect> pieces;
  LabelMap f;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const auto dec = eig_h(eta.atom(i).matrix());
    bool any = false;
    for (Index j = 0; j < d; ++j) {
      const double lambda = dec.eigenvalues(j);
      if (lambda <= drop) continue;
      const auto u = dec.vectors.col(j);
      f[static_cast<double>(pieces.size())] = eta.label(i);
      pieces.push_back(Effect::hilbert(std::min(lambda, 1.0) * (u * u.adjoint())));
      any = true;
    }
    if (!any) {
      f[static_cast<double>(pieces.size())] = eta.label(i);
      pieces.push_back(Effect::zero(Backend::hilbert, d));
    }
  }
  return {make_observable(std::move(pieces)), std::move(f)};
}

CleanReport is_clean(const Observable& eta, bool witness) {
  require_hilbert(eta, "is_clean");
  CleanReport out;
  out.clean = std::all_of(eta.atoms().begin(), eta.atoms().end(),
                          [](const Effect& a) { return rank_h(a.matrix()) <= 1; });
  if (witness) {
    out.refinement = rank_one_refinement(eta);
    out.refinement_below = preorder_leq(out.refinement->xi, eta).holds;
    out.eta_below = preorder_leq(eta, out.refinement->xi).holds;
  }
  return out;
}

std::optional<TwoValuedCoefficients> two_valued_leq(const Effect& b, const Effect& a) {
  require_compatible(a, b, "two_valued_leq");
  if (a.backend() != Backend::hilbert)
    throw Error(Errc::BackendMismatch, "two_valued_leq: needs hilbert effects");
  const Index d = a.dim();
  const double tol = tolerances().eq;
  const CMatrix& bm = b.matrix();
  const CMatrix bc = CMatrix::Identity(d, d) - bm;
  const CMatrix& am = a.matrix();

  auto inner = [](const CMatrix& x, const CMatrix& y) { return (x.adjoint() * y).trace().real(); };
  const double g00 = inner(bm, bm);
  const double g01 = inner(bm, bc);
  const double g11 = inner(bc, bc);
  const double r0 = inner(bm, am);
  const double r1 = inner(bc, am);
  const double det = g00 * g11 - g01 * g01;

  if (det > 1e-12 * std::max(g00 * g11, 1e-300)) {
    const double t = (g11 * r0 - g01 * r1) / det;
    const double s = (g00 * r1 - g01 * r0) / det;
    const double tc = std::clamp(t, 0.0, 1.0);
    const double sc = std::clamp(s, 0.0, 1.0);
    if (sup_norm(am - tc * bm - sc * bc) <= tol) return TwoValuedCoefficients{tc, sc};
    // Frobenius norm bounds d times the sup-norm: a large least-squares
    // residual rules out every (t, s).
    if ((am - t * bm - s * bc).norm() > static_cast<double>(d) * tol) return std::nullopt;
  }

  // Degenerate span (B a multiple of I) or a borderline case: box-constrained
  // feasibility over (t, s, 1 - t, 1 - s).
  const Eigen::VectorXd cb = real_coordinates(b);
  const Eigen::VectorXd cc = real_coordinates(orthosupplement(b));
  FeasibilityProblem lp;
  lp.equalities = Eigen::MatrixXd::Zero(cb.size(), 4);
  lp.equalities.col(0) = cb;
  lp.equalities.col(1) = cc;
  lp.rhs = real_coordinates(a);
  lp.simplex_groups = {{0, 2}, {1, 3}};
  const FeasibilityResult sol = solve_feasibility(lp);
  if (!sol.feasible()) return std::nullopt;
  return TwoValuedCoefficients{std::clamp(sol.x(0), 0.0, 1.0), std::clamp(sol.x(1), 0.0, 1.0)};
}

bool two_valued_is_minimal(const Effect& a) {
  if (a.backend() != Backend::hilbert)
    throw Error(Errc::BackendMismatch, "two_valued_is_minimal: needs a hilbert effect");
  const auto ev = eigenvalues_h(a.matrix());
  const double tol = tolerances().eq;
  const double norm = ev.maxCoeff();
  const double norm_complement = 1.0 - ev.minCoeff();
  return std::abs(norm - 1.0) <= tol && std::abs(norm_complement - 1.0) <= tol;
}

std::optional<PvmMother> pvm_mother(const Observable& eta) {
  require_hilbert(eta, "pvm_mother");
  std::vector<CMatrix> mats;
  mats.reserve(eta.size());
  for (const auto& a : eta.atoms()) mats.push_back(a.matrix());
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      if (!commutes(mats[i], mats[j])) return std::nullopt;

  const auto basis = simultaneous_eigenbasis(mats);
  const Index d = eta.dim();
  const double same = tolerances().cluster;

  // Group basis vectors by joint eigenvalue tuple.
  std::vector<std::vector<Index>> groups;
  for (Index x = 0; x < d; ++x) {
    auto match = std::find_if(groups.begin(), groups.end(), [&](const std::vector<Index>& g) {
      for (const auto& ev : basis.eigenvalues)
        if (std::abs(ev(g.front()) - ev(x)) > same) return false;
      return true;
    });
    if (match == groups.end())
      groups.push_back({x});
    else
      match->push_back(x);
  }

  const auto r = static_cast<Index>(groups.size());
  const auto l = static_cast<Index>(eta.size());
  Eigen::MatrixXd nu(r, l);
  std::vector<Effect> projections;
  projections.reserve(groups.size());
  for (Index g = 0; g < r; ++g) {
    const auto& members = groups[static_cast<std::size_t>(g)];
    CMatrix proj = CMatrix::Zero(d, d);
    for (Index x : members) proj += basis.unitary.col(x) * basis.unitary.col(x).adjoint();
    projections.push_back(Effect::hilbert(std::move(proj)));
    for (Index j = 0; j < l; ++j) {
      double acc = 0.0;
      for (Index x : members) acc += basis.eigenvalues[static_cast<std::size_t>(j)](x);
      nu(g, j) = std::clamp(acc / static_cast<double>(members.size()), 0.0, 1.0);
    }
    nu.row(g) /= nu.row(g).sum();
  }
  return PvmMother{make_observable(std::move(projections)), MarkovKernel(std::move(nu))};
}

bool range_inclusion_check(const Observable& xi, const Observable& eta, const MarkovKernel& nu) {
  require_same_algebra(xi, eta, "range_inclusion_check");
  const double tol = tolerances().eq;
  if (nu.source_size() != static_cast<Index>(xi.size()) || nu.target_size() != static_cast<Index>(eta.size()))
    throw Error(Errc::NotASmearing, "range_inclusion_check: kernel shape does not match the observables");
  if (atom_distance(smear(xi, nu, eta.labels()), eta) > tol)
    throw Error(Errc::NotASmearing, "range_inclusion_check: smear(xi, nu) differs from eta");
  if (!nu.is_deterministic(tol))
    throw Error(Errc::NotDeterministicKernel, "range_inclusion_check: kernel has entries strictly inside (0,1)");
  for (std::size_t j = 0; j < eta.size(); ++j) {
    std::vector<double> event;
    for (std::size_t i = 0; i < xi.size(); ++i)
      if (nu(static_cast<Index>(i), static_cast<Index>(j)) > 0.5) event.push_back(xi.label(i));
    if (!approx_equal(xi.measure(event), eta.atom(j), tol)) return false;
  }
  return true;
}

}  // namespace povcal
