#include "povcal/effects.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace povcal {

namespace {

// Eigenvalues this close outside [0,1] are rounding noise and left alone.
constexpr double kSpectralNoise = 1e-12;

CMatrix symmetrized(const CMatrix& a) {
  if (hermiticity_defect(a) == 0.0) return a;
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

std::string_view to_string(Backend b) {
  return b == Backend::hilbert ? "hilbert" : "tribe";
}

Effect Effect::hilbert(CMatrix a) {
  detail::require_hermitian(a, "Effect::hilbert");
  a = symmetrized(a);
  if (a.rows() == 0) throw Error(Errc::InvalidEffect, "Effect::hilbert: empty matrix");
  const auto dec = eig_h(a);
  const double lo = dec.eigenvalues.minCoeff();
  const double hi = dec.eigenvalues.maxCoeff();
  const double psd = tolerances().psd;
  if (lo < -psd || hi > 1.0 + psd)
    throw Error(Errc::InvalidEffect, "Effect::hilbert: spectrum [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "] not inside [0,1]");
  if (lo < -kSpectralNoise || hi > 1.0 + kSpectralNoise) {
    const Eigen::VectorXd clamped = dec.eigenvalues.cwiseMax(0.0).cwiseMin(1.0);
    a = dec.vectors * clamped.cast<std::complex<double>>().asDiagonal() * dec.vectors.adjoint();
    a = (a + a.adjoint()) / 2.0;
  }
  return Effect(std::move(a));
}

Effect Effect::tribe(Eigen::VectorXd f) {
  if (f.size() == 0) throw Error(Errc::InvalidEffect, "Effect::tribe: empty base set");
  if (!f.allFinite()) throw Error(Errc::NonFinite, "Effect::tribe: non-finite coordinate");
  const double psd = tolerances().psd;
  for (Index i = 0; i < f.size(); ++i) {
    if (f(i) < -psd || f(i) > 1.0 + psd)
      throw Error(Errc::InvalidEffect, "Effect::tribe: coordinate " + std::to_string(i) + " = " +
                                           std::to_string(f(i)) + " not in [0,1]");
    f(i) = std::clamp(f(i), 0.0, 1.0);
  }
  return Effect(std::move(f));
}

Effect Effect::zero(Backend backend, Index dim) {
  if (backend == Backend::hilbert) return Effect(CMatrix(CMatrix::Zero(dim, dim)));
  return Effect(Eigen::VectorXd(Eigen::VectorXd::Zero(dim)));
}

Effect Effect::one(Backend backend, Index dim) {
  if (backend == Backend::hilbert) return Effect(CMatrix(CMatrix::Identity(dim, dim)));
  return Effect(Eigen::VectorXd(Eigen::VectorXd::Ones(dim)));
}

Index Effect::dim() const noexcept {
  if (const auto* m = std::get_if<CMatrix>(&payload_)) return m->rows();
  return std::get<Eigen::VectorXd>(payload_).size();
}

const CMatrix& Effect::matrix() const {
  if (const auto* m = std::get_if<CMatrix>(&payload_)) return *m;
  throw Error(Errc::BackendMismatch, "Effect::matrix: tribe element has no operator payload");
}

const Eigen::VectorXd& Effect::values() const {
  if (const auto* v = std::get_if<Eigen::VectorXd>(&payload_)) return *v;
  throw Error(Errc::BackendMismatch, "Effect::values: hilbert element has no tribe payload");
}

void require_compatible(const Effect& a, const Effect& b, const char* who) {
  if (a.backend() != b.backend())
    throw Error(Errc::BackendMismatch, std::string(who) + ": " + std::string(to_string(a.backend())) +
                                           " vs " + std::string(to_string(b.backend())));
  if (a.dim() != b.dim())
    throw Error(Errc::DimMismatch,
                std::string(who) + ": dim " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

std::optional<Effect> oplus(const Effect& a, const Effect& b) {
  require_compatible(a, b, "oplus");
  if (a.backend() == Backend::hilbert) {
    CMatrix sum = a.matrix() + b.matrix();
    if (!loewner_leq(sum, CMatrix::Identity(a.dim(), a.dim()))) return std::nullopt;
    return Effect::hilbert(std::move(sum));
  }
  Eigen::VectorXd sum = a.values() + b.values();
  if (sum.maxCoeff() > 1.0 + tolerances().psd) return std::nullopt;
  return Effect::tribe(std::move(sum));
}

Effect orthosupplement(const Effect& a) {
  if (a.backend() == Backend::hilbert)
    return Effect::hilbert(CMatrix::Identity(a.dim(), a.dim()) - a.matrix());
  return Effect::tribe(Eigen::VectorXd::Ones(a.dim()) - a.values());
}

Effect ominus(const Effect& b, const Effect& a) {
  if (!partial_order_leq(a, b)) throw Error(Errc::NotComparable, "ominus: a is not below b");
  if (b.backend() == Backend::hilbert) return Effect::hilbert(b.matrix() - a.matrix());
  return Effect::tribe(b.values() - a.values());
}

bool partial_order_leq(const Effect& a, const Effect& b) {
  require_compatible(a, b, "partial_order_leq");
  if (a.backend() == Backend::hilbert) return loewner_leq(a.matrix(), b.matrix());
  return ((a.values() - b.values()).array() <= tolerances().psd).all();
}

bool is_sharp(const Effect& a) {
  const double tol = tolerances().eq;
  if (a.backend() == Backend::hilbert) {
    const CMatrix sq = a.matrix() * a.matrix();
    return sup_norm(sq - a.matrix()) <= tol;
  }
  return (a.values().array().abs() <= tol || (a.values().array() - 1.0).abs() <= tol).all();
}

IsotropicIndex isotropic_index(const Effect& a) {
  const double norm =
      a.backend() == Backend::hilbert ? operator_norm_h(a.matrix()) : a.values().cwiseAbs().maxCoeff();
  if (norm <= 0.0) return {true, 0};
  const double bound = 1.0 + tolerances().psd;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max() - 1;
  const double estimate = std::floor(bound / norm);
  if (estimate >= static_cast<double>(kMax)) return {false, kMax};
  auto n = static_cast<std::uint64_t>(estimate);
  // floor() of a rounded quotient can be off by one in either direction.
  while (static_cast<double>(n + 1) * norm <= bound) ++n;
  while (n > 0 && static_cast<double>(n) * norm > bound) --n;
  return {false, n};
}

double sup_distance(const Effect& a, const Effect& b) {
  require_compatible(a, b, "sup_distance");
  if (a.backend() == Backend::hilbert) return sup_norm(a.matrix() - b.matrix());
  return sup_norm(a.values() - b.values());
}

bool approx_equal(const Effect& a, const Effect& b, double tol) { return sup_distance(a, b) <= tol; }

Effect weighted_sum(std::span<const Effect> atoms, std::span<const double> weights) {
  if (atoms.empty()) throw Error(Errc::DimMismatch, "weighted_sum: no atoms");
  if (atoms.size() != weights.size())
    throw Error(Errc::DimMismatch, "weighted_sum: " + std::to_string(atoms.size()) + " atoms, " +
                                       std::to_string(weights.size()) + " weights");
  const Effect& first = atoms.front();
  for (const auto& e : atoms) require_compatible(first, e, "weighted_sum");
  if (first.backend() == Backend::hilbert) {
    CMatrix acc = CMatrix::Zero(first.dim(), first.dim());
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (weights[i] != 0.0) acc += weights[i] * atoms[i].matrix();
    return Effect::hilbert(std::move(acc));
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(first.dim());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (weights[i] != 0.0) acc += weights[i] * atoms[i].values();
  return Effect::tribe(std::move(acc));
}

Eigen::VectorXd real_coordinates(const Effect& a) {
  if (a.backend() == Backend::tribe) return a.values();
  const CMatrix& m = a.matrix();
  const Index d = m.rows();
  Eigen::VectorXd out(d * d);
  Index k = 0;
  for (Index i = 0; i < d; ++i) out(k++) = m(i, i).real();
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      out(k++) = m(i, j).real();
      out(k++) = m(i, j).imag();
    }
  return out;
}

State State::density(CMatrix rho) {
  detail::require_hermitian(rho, "State::density");
  if (rho.rows() == 0) throw Error(Errc::InvalidState, "State::density: empty matrix");
  rho = symmetrized(rho);
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tolerances().trace)
    throw Error(Errc::InvalidState, "State::density: trace " + std::to_string(tr) + " != 1");
  const double lo = eigenvalues_h(rho).minCoeff();
  if (lo < -tolerances().psd)
    throw Error(Errc::InvalidState, "State::density: negative eigenvalue " + std::to_string(lo));
  return State(std::move(rho), lo > 1e-9);
}

State State::probability(Eigen::VectorXd p) {
  if (p.size() == 0) throw Error(Errc::InvalidState, "State::probability: empty vector");
  if (!p.allFinite()) throw Error(Errc::NonFinite, "State::probability: non-finite weight");
  if (p.minCoeff() < -tolerances().psd)
    throw Error(Errc::InvalidState, "State::probability: negative weight");
  p = p.cwiseMax(0.0);
  if (std::abs(p.sum() - 1.0) > tolerances().trace)
    throw Error(Errc::InvalidState, "State::probability: weights sum to " + std::to_string(p.sum()));
  const bool faithful = p.minCoeff() > 1e-9;
  return State(std::move(p), faithful);
}

State State::maximally_mixed(Backend backend, Index dim) {
  if (backend == Backend::hilbert)
    return density(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  return probability(Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim)));
}

Index State::dim() const noexcept {
  if (const auto* m = std::get_if<CMatrix>(&payload_)) return m->rows();
  return std::get<Eigen::VectorXd>(payload_).size();
}

const CMatrix& State::matrix() const {
  if (const auto* m = std::get_if<CMatrix>(&payload_)) return *m;
  throw Error(Errc::BackendMismatch, "State::matrix: tribe state has no density matrix");
}

const Eigen::VectorXd& State::weights() const {
  if (const auto* v = std::get_if<Eigen::VectorXd>(&payload_)) return *v;
  throw Error(Errc::BackendMismatch, "State::weights: hilbert state has no probability vector");
}

double state_eval(const State& m, const Effect& a) {
  if (m.backend() != a.backend())
    throw Error(Errc::BackendMismatch, "state_eval: state and effect backends differ");
  if (m.dim() != a.dim())
    throw Error(Errc::DimMismatch, "state_eval: state dim " + std::to_string(m.dim()) +
                                       " vs effect dim " + std::to_string(a.dim()));
  if (a.backend() == Backend::hilbert) {
    const CMatrix& rho = m.matrix();
    const CMatrix& op = a.matrix();
    double acc = 0.0;
    for (Index i = 0; i < rho.rows(); ++i)
      for (Index j = 0; j < rho.cols(); ++j) acc += (rho(i, j) * op(j, i)).real();
    return std::clamp(acc, 0.0, 1.0);
  }
  const Eigen::VectorXd& p = m.weights();
  const Eigen::VectorXd& f = a.values();
  double acc = 0.0;
  for (Index x = 0; x < f.size(); ++x) acc += f(x) * p(x);
  return acc;
}

}  // namespace povcal
