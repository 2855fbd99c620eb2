#include "povcal/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace povcal {

Observable make_observable(std::vector<double> labels, std::vector<Effect> atoms) {
  if (labels.empty() || labels.size() != atoms.size())
    throw Error(Errc::DimMismatch, "make_observable: " + std::to_string(labels.size()) + " labels, " +
                                       std::to_string(atoms.size()) + " atoms");
  const Effect& first = atoms.front();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(labels[i]))
      throw Error(Errc::InvalidAtom, "make_observable: label " + std::to_string(i) + " is not finite");
    if (atoms[i].backend() != first.backend() || atoms[i].dim() != first.dim())
      throw Error(Errc::InvalidAtom,
                  "make_observable: atom " + std::to_string(i) + " has a different backend or dimension");
  }

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  std::vector<double> sorted_labels;
  std::vector<Effect> sorted_atoms;
  sorted_labels.reserve(labels.size());
  sorted_atoms.reserve(atoms.size());
  for (std::size_t i : order) {
    if (!sorted_labels.empty() && sorted_labels.back() == labels[i])
      throw Error(Errc::DuplicateLabel, "make_observable: label " + std::to_string(labels[i]) + " repeats");
    sorted_labels.push_back(labels[i]);
    sorted_atoms.push_back(atoms[i]);
  }

  double defect = 0.0;
  if (first.backend() == Backend::hilbert) {
    CMatrix sum = CMatrix::Zero(first.dim(), first.dim());
    for (const auto& a : sorted_atoms) sum += a.matrix();
    defect = sup_norm(sum - CMatrix::Identity(first.dim(), first.dim()));
  } else {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(first.dim());
    for (const auto& a : sorted_atoms) sum += a.values();
    defect = sup_norm((sum.array() - 1.0).matrix());
  }
  if (defect > tolerances().eq)
    throw Error(Errc::NotNormalized,
                "make_observable: atoms sum to the unit element only within " + std::to_string(defect));
  return Observable(std::move(sorted_labels), std::move(sorted_atoms));
}

Observable make_observable(std::vector<Effect> atoms) {
  std::vector<double> labels(atoms.size());
  std::iota(labels.begin(), labels.end(), 0.0);
  return make_observable(std::move(labels), std::move(atoms));
}

Effect Observable::measure(const std::vector<double>& event) const {
  std::vector<double> weights(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    if (std::find(event.begin(), event.end(), labels_[i]) != event.end()) weights[i] = 1.0;
  return weighted_sum(atoms_, weights);
}

Observable two_valued(const Effect& a) { return make_observable({0.0, 1.0}, {orthosupplement(a), a}); }

Observable trivial_observable(Backend backend, Index dim, double label) {
  return make_observable({label}, {Effect::one(backend, dim)});
}

Observable pushforward(const Observable& xi, const LabelMap& f) {
  std::vector<double> images;
  images.reserve(xi.size());
  for (double x : xi.labels()) {
    const auto it = f.find(x);
    if (it == f.end())
      throw Error(Errc::PartialFunction, "pushforward: no image for label " + std::to_string(x));
    images.push_back(it->second);
  }
  std::vector<double> targets = images;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::vector<Effect> atoms;
  atoms.reserve(targets.size());
  for (double y : targets) {
    std::vector<double> weights(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) weights[i] = images[i] == y ? 1.0 : 0.0;
    atoms.push_back(weighted_sum(xi.atoms(), weights));
  }
  return make_observable(std::move(targets), std::move(atoms));
}

double mean_value(const State& m, const Observable& xi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) acc += xi.label(i) * state_eval(m, xi.atom(i));
  return acc;
}

Eigen::VectorXd distribution(const Observable& xi, const State& m) {
  Eigen::VectorXd out(static_cast<Index>(xi.size()));
  for (std::size_t i = 0; i < xi.size(); ++i) out(static_cast<Index>(i)) = state_eval(m, xi.atom(i));
  return out;
}

std::vector<double> spectrum(const Observable& xi) {
  std::vector<double> out;
  const Effect zero = Effect::zero(xi.backend(), xi.dim());
  for (std::size_t i = 0; i < xi.size(); ++i)
    if (sup_distance(xi.atom(i), zero) > tolerances().eq) out.push_back(xi.label(i));
  return out;
}

bool is_sharp_observable(const Observable& xi) {
  return std::all_of(xi.atoms().begin(), xi.atoms().end(), [](const Effect& a) { return is_sharp(a); });
}

double atom_distance(const Observable& a, const Observable& b) {
  if (a.size() != b.size())
    throw Error(Errc::DimMismatch, "atom_distance: " + std::to_string(a.size()) + " vs " +
                                       std::to_string(b.size()) + " outcomes");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, sup_distance(a.atom(i), b.atom(i)));
  return worst;
}

}  // namespace povcal
