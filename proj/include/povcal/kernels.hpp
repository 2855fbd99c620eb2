#pragma once

// Markov kernels between finite outcome spaces, stored as row-stochastic
// matrices: row i is the probability vector nu(x_i, .). Rows follow the
// canonical (sorted-label) atom order of the source observable.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "povcal/observables.hpp"

namespace povcal {

/// Checks that p is a probability vector (entries >= -1e-12, sum within
/// 1e-10 of 1) and returns it with tiny negatives clamped to zero. Throws
/// InvalidProbability.
Eigen::VectorXd checked_probability(const Eigen::VectorXd& p);

class MarkovKernel {
 public:
  /// Validates entries in [0,1] (within 1e-12, then clamped) and row sums
  /// within 1e-10 of 1 (then renormalized). Throws InvalidKernel.
  explicit MarkovKernel(Eigen::MatrixXd rows);

  static MarkovKernel identity(Index n);
  /// Every source outcome goes to a single target outcome.
  static MarkovKernel trivial(Index source_size);

  [[nodiscard]] Index source_size() const noexcept { return rows_.rows(); }
  [[nodiscard]] Index target_size() const noexcept { return rows_.cols(); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return rows_; }
  [[nodiscard]] double operator()(Index i, Index j) const { return rows_(i, j); }

  /// Every entry within `tol` of 0 or 1.
  [[nodiscard]] bool is_deterministic(double tol = tolerances().eq) const;

 private:
  Eigen::MatrixXd rows_;
};

/// A kernel whose Markov conditions are only required on the masked source
/// rows; the remaining rows are unconstrained (finite "almost everywhere").
class WeakMarkovKernel {
 public:
  WeakMarkovKernel(Eigen::MatrixXd rows, std::vector<bool> support_mask);

  [[nodiscard]] Index source_size() const noexcept { return rows_.rows(); }
  [[nodiscard]] Index target_size() const noexcept { return rows_.cols(); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return rows_; }
  [[nodiscard]] const std::vector<bool>& support_mask() const noexcept { return mask_; }
  [[nodiscard]] bool in_support(Index i) const { return mask_.at(static_cast<std::size_t>(i)); }

  /// Fills the unconstrained rows with point masses at target 0, giving a
  /// genuine Markov kernel that agrees with this one on the mask.
  [[nodiscard]] MarkovKernel regularized() const;

 private:
  Eigen::MatrixXd rows_;
  std::vector<bool> mask_;
};

/// P x nu on the product space: entries p_i nu_ij.
struct ProductMeasure {
  Eigen::MatrixXd joint;

  [[nodiscard]] Eigen::VectorXd source_marginal() const { return joint.rowwise().sum(); }
  [[nodiscard]] Eigen::VectorXd target_marginal() const { return joint.colwise().sum().transpose(); }
};

/// nu1 followed by nu2, i.e. the matrix product nu1 * nu2.
MarkovKernel compose(const MarkovKernel& nu1, const MarkovKernel& nu2);

/// 0-1 kernel of a map between label sets: row i has its 1 in the column of
/// f(source[i]) within `target`. Throws PartialFunction.
MarkovKernel deterministic_kernel(std::span<const double> source, std::span<const double> target,
                                  const LabelMap& f);
/// Index form: row i has its 1 in column index_map[i].
MarkovKernel deterministic_kernel(std::span<const Index> index_map, Index target_size);

/// eta(y_j) = sum_i nu_ij xi(x_i). Target labels default to 0..l-1.
Observable smear(const Observable& xi, const MarkovKernel& nu,
                 std::optional<std::vector<double>> target_labels = std::nullopt);

/// nu(P) = p * nu.
Eigen::VectorXd apply_to_measure(const MarkovKernel& nu, const Eigen::VectorXd& p);
/// Weak form; p must vanish outside the support mask (MaskViolation).
Eigen::VectorXd apply_to_measure(const WeakMarkovKernel& nu, const Eigen::VectorXd& p);

/// Bayes reverse nu'_ji = p_i nu_ij / (p nu)_j, defined on supp(p nu).
/// Rows outside the mask are zero.
WeakMarkovKernel reverse_kernel(const MarkovKernel& nu, const Eigen::VectorXd& p);

ProductMeasure product_measure(const Eigen::VectorXd& p, const MarkovKernel& nu);

}  // namespace povcal
