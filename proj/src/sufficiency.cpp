#include "povcal/sufficiency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "povcal/sampling.hpp"

namespace povcal {

namespace {

double hellinger_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  static const ConvexGenerator gen = builtin("hellinger");
  // Hellinger values are always finite (f_at_0 = 1, f_inf = 0).
  return f_divergence(gen, p, q).value();
}

void require_family(const MarkovKernel& nu, const std::vector<Eigen::VectorXd>& family, const char* who) {
  if (family.empty()) throw Error(Errc::EmptyFamily, std::string(who) + ": empty family");
  for (const auto& p : family)
    if (p.size() != nu.source_size())
      throw Error(Errc::DimMismatch, std::string(who) + ": distribution of size " + std::to_string(p.size()) +
                                         " for a kernel with " + std::to_string(nu.source_size()) + " rows");
}

}  // namespace

PairwiseSufficiency pairwise_sufficient(const MarkovKernel& nu, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != nu.source_size() || q.size() != nu.source_size())
    throw Error(Errc::DimMismatch, "pairwise_sufficient: distribution sizes do not match the kernel");
  PairwiseSufficiency out;
  out.hellinger_source = hellinger_divergence(checked_probability(p), checked_probability(q));
  out.hellinger_image = hellinger_divergence(apply_to_measure(nu, p), apply_to_measure(nu, q));
  out.gap = std::abs(out.hellinger_source - out.hellinger_image);
  out.sufficient = out.gap <= tolerances().suff;
  return out;
}

Eigen::VectorXd dominating_mixture(const std::vector<Eigen::VectorXd>& family) {
  if (family.empty()) throw Error(Errc::EmptyFamily, "dominating_mixture: empty family");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(family.front().size());
  for (const auto& p : family) {
    if (p.size() != acc.size())
      throw Error(Errc::DimMismatch, "dominating_mixture: distributions of sizes " + std::to_string(acc.size()) +
                                         " and " + std::to_string(p.size()));
    acc += checked_probability(p);
  }
  return acc / static_cast<double>(family.size());
}

FamilySufficiency sufficient_for_family(const MarkovKernel& nu, const std::vector<Eigen::VectorXd>& family) {
  require_family(nu, family, "sufficient_for_family");
  const Eigen::VectorXd p0 = dominating_mixture(family);
  FamilySufficiency out{true, 0.0};
  for (const auto& p : family) {
    const auto pair = pairwise_sufficient(nu, p, p0);
    out.max_gap = std::max(out.max_gap, pair.gap);
    out.sufficient = out.sufficient && pair.sufficient;
  }
  return out;
}

BlackwellSufficiency blackwell_sufficient(const MarkovKernel& nu, const std::vector<Eigen::VectorXd>& family) {
  require_family(nu, family, "blackwell_sufficient");
  const Index k = nu.source_size();
  const Index l = nu.target_size();

  std::vector<Eigen::VectorXd> sources;
  std::vector<Eigen::VectorXd> images;
  for (const auto& p : family) {
    sources.push_back(checked_probability(p));
    images.push_back(apply_to_measure(nu, sources.back()));
  }
  Eigen::VectorXd mixture = Eigen::VectorXd::Zero(l);
  for (const auto& img : images) mixture += img;

  std::vector<Index> support;
  std::vector<bool> mask(static_cast<std::size_t>(l), false);
  for (Index j = 0; j < l; ++j)
    if (mixture(j) > 0.0) {
      support.push_back(j);
      mask[static_cast<std::size_t>(j)] = true;
    }
  const auto s = static_cast<Index>(support.size());
  const auto members = static_cast<Index>(family.size());

  // Unknowns: recovery(support[a], i) at a * k + i.
  FeasibilityProblem lp;
  lp.equalities = Eigen::MatrixXd::Zero(members * k, s * k);
  lp.rhs.resize(members * k);
  for (Index r = 0; r < members; ++r)
    for (Index i = 0; i < k; ++i) {
      const Index row = r * k + i;
      lp.rhs(row) = sources[static_cast<std::size_t>(r)](i);
      for (Index a = 0; a < s; ++a) lp.equalities(row, a * k + i) = images[static_cast<std::size_t>(r)](support[static_cast<std::size_t>(a)]);
    }
  for (Index a = 0; a < s; ++a) {
    std::vector<Index> group(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) group[static_cast<std::size_t>(i)] = a * k + i;
    lp.simplex_groups.push_back(std::move(group));
  }

  const FeasibilityResult sol = solve_feasibility(lp);
  BlackwellSufficiency out;
  if (!sol.feasible()) return out;
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(l, k);
  for (Index a = 0; a < s; ++a) {
    auto row = rows.row(support[static_cast<std::size_t>(a)]);
    for (Index i = 0; i < k; ++i) row(i) = std::clamp(sol.x(a * k + i), 0.0, 1.0);
    row /= row.sum();
  }
  out.sufficient = true;
  out.recovery = WeakMarkovKernel(std::move(rows), std::move(mask));
  return out;
}

SufficiencyReport equivalence_battery(const Observable& xi, const Observable& eta, const MarkovKernel& nu,
                                      const State& m0, std::size_t n_states, std::uint64_t seed) {
  if (xi.backend() != Backend::hilbert || eta.backend() != Backend::hilbert || m0.backend() != Backend::hilbert)
    throw Error(Errc::BackendMismatch, "equivalence_battery: needs hilbert observables and state");
  if (xi.dim() != eta.dim() || m0.dim() != xi.dim())
    throw Error(Errc::DimMismatch, "equivalence_battery: dimensions of xi, eta and m0 differ");
  if (nu.source_size() != static_cast<Index>(xi.size()) || nu.target_size() != static_cast<Index>(eta.size()))
    throw Error(Errc::NotASmearing, "equivalence_battery: kernel shape does not match xi and eta");
  if (atom_distance(smear(xi, nu, eta.labels()), eta) > tolerances().eq)
    throw Error(Errc::NotASmearing, "equivalence_battery: smear(xi, nu) differs from eta");
  if (!m0.faithful()) throw Error(Errc::NotFaithful, "equivalence_battery: reference state is not faithful");

  const Index d = xi.dim();
  std::vector<State> states = canonical_states(d);
  SufficiencyReport report;
  report.canonical_states = states.size();
  Rng rng(seed);
  for (std::size_t s = 0; s < n_states; ++s) states.push_back(random_density(rng, d));
  report.sampled_states = n_states;

  std::vector<Eigen::VectorXd> source;
  source.reserve(states.size());
  for (const auto& m : states) source.push_back(distribution(xi, m));

  // Hellinger against the faithful reference.
  const Eigen::VectorXd ref = distribution(xi, m0);
  for (const auto& p : source)
    report.vs_mixture_max_gap = std::max(report.vs_mixture_max_gap, pairwise_sufficient(nu, p, ref).gap);
  // Consecutive state pairs, cyclically.
  for (std::size_t a = 0; a < source.size(); ++a) {
    const auto& p = source[a];
    const auto& q = source[(a + 1) % source.size()];
    report.pairwise_max_gap = std::max(report.pairwise_max_gap, pairwise_sufficient(nu, p, q).gap);
  }
  const double tol = tolerances().suff;
  report.pairwise = report.pairwise_max_gap <= tol;
  report.vs_mixture = report.vs_mixture_max_gap <= tol;
  report.hellinger_max_gap = std::max(report.pairwise_max_gap, report.vs_mixture_max_gap);

  // Blackwell constraints are linear in the distribution, so the
  // spanning canonical family decides them for every state.
  const std::vector<Eigen::VectorXd> spanning(source.begin(),
                                              source.begin() + static_cast<std::ptrdiff_t>(report.canonical_states));
  auto bw = blackwell_sufficient(nu, spanning);
  report.blackwell = bw.sufficient;
  report.recovery = std::move(bw.recovery);

  // Operator-level equivalence.
  auto equivalence = fuzzy_equivalent(xi, eta);
  report.fuzzy_equivalent = equivalence.equivalent;
  report.backward_witness = std::move(equivalence.backward.witness);
  report.agree = report.blackwell == report.fuzzy_equivalent;
  return report;
}

}  // namespace povcal
