#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "povcal/effects.hpp"

namespace povcal {

/// A finite-outcome observable: distinct real labels, one effect per label,
/// effects summing to the unit element. Labels are kept strictly increasing;
/// atom i always belongs to label i.
class Observable {
 public:
  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::vector<double>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::vector<Effect>& atoms() const noexcept { return atoms_; }
  [[nodiscard]] double label(std::size_t i) const { return labels_.at(i); }
  [[nodiscard]] const Effect& atom(std::size_t i) const { return atoms_.at(i); }
  [[nodiscard]] Backend backend() const noexcept { return atoms_.front().backend(); }
  [[nodiscard]] Index dim() const noexcept { return atoms_.front().dim(); }

  /// xi(E) for a set of labels E; labels outside the outcome set contribute nothing.
  [[nodiscard]] Effect measure(const std::vector<double>& event) const;

 private:
  friend Observable make_observable(std::vector<double> labels, std::vector<Effect> atoms);
  Observable(std::vector<double> labels, std::vector<Effect> atoms)
      : labels_(std::move(labels)), atoms_(std::move(atoms)) {}

  std::vector<double> labels_;
  std::vector<Effect> atoms_;
};

/// Validates and sorts by label. Errors: NotNormalized, DuplicateLabel,
/// InvalidAtom (mixed backends or dims, non-finite label).
Observable make_observable(std::vector<double> labels, std::vector<Effect> atoms);

/// Same as make_observable with labels 0, 1, ..., k-1.
Observable make_observable(std::vector<Effect> atoms);

/// E^A: labels (0, 1) with atoms (A', A).
Observable two_valued(const Effect& a);

/// The one-outcome observable {label -> 1}.
Observable trivial_observable(Backend backend, Index dim, double label = 0.0);

using LabelMap = std::map<double, double>;

/// f o xi: label y gets sum_{f(x) = y} xi(x). Throws PartialFunction when f
/// misses a label of xi.
Observable pushforward(const Observable& xi, const LabelMap& f);

/// Expectation sum_i x_i m(xi(x_i)).
double mean_value(const State& m, const Observable& xi);

/// Phi_xi(m) = (m(xi(x_1)), ..., m(xi(x_k))).
Eigen::VectorXd distribution(const Observable& xi, const State& m);

/// Phi_xi as a callable: State -> probability vector over xi's labels.
class DistributionMap {
 public:
  explicit DistributionMap(Observable xi) : xi_(std::move(xi)) {}
  [[nodiscard]] const Observable& observable() const noexcept { return xi_; }
  Eigen::VectorXd operator()(const State& m) const { return distribution(xi_, m); }

 private:
  Observable xi_;
};

/// Labels whose atom is nonzero (sup-norm above TOL_EQ).
std::vector<double> spectrum(const Observable& xi);

/// Every atom is sharp.
bool is_sharp_observable(const Observable& xi);

/// max_i sup-distance between atoms; throws DimMismatch when the outcome
/// counts differ.
double atom_distance(const Observable& a, const Observable& b);

}  // namespace povcal
