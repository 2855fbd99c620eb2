#include "povcal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace povcal {

namespace {

constexpr double kEntrySlack = 1e-12;
constexpr double kRowSumSlack = 1e-10;

std::string shape(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

Eigen::VectorXd checked_probability(const Eigen::VectorXd& p) {
  if (p.size() == 0) throw Error(Errc::InvalidProbability, "probability vector is empty");
  if (!p.allFinite()) throw Error(Errc::InvalidProbability, "probability vector has non-finite entries");
  if (p.minCoeff() < -kEntrySlack)
    throw Error(Errc::InvalidProbability, "negative probability " + std::to_string(p.minCoeff()));
  Eigen::VectorXd out = p.cwiseMax(0.0);
  if (std::abs(out.sum() - 1.0) > kRowSumSlack)
    throw Error(Errc::InvalidProbability, "probabilities sum to " + std::to_string(out.sum()));
  return out;
}

MarkovKernel::MarkovKernel(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0) throw Error(Errc::InvalidKernel, "kernel has an empty side");
  if (!rows_.allFinite()) throw Error(Errc::InvalidKernel, "kernel has non-finite entries");
  if (rows_.minCoeff() < -kEntrySlack || rows_.maxCoeff() > 1.0 + kEntrySlack)
    throw Error(Errc::InvalidKernel, "kernel entry outside [0,1]");
  rows_ = rows_.cwiseMax(0.0).cwiseMin(1.0);
  for (Index i = 0; i < rows_.rows(); ++i) {
    const double s = rows_.row(i).sum();
    if (std::abs(s - 1.0) > kRowSumSlack)
      throw Error(Errc::InvalidKernel, "row " + std::to_string(i) + " sums to " + std::to_string(s));
    if (s != 1.0) rows_.row(i) /= s;
  }
}

MarkovKernel MarkovKernel::identity(Index n) { return MarkovKernel(Eigen::MatrixXd::Identity(n, n)); }

MarkovKernel MarkovKernel::trivial(Index source_size) {
  return MarkovKernel(Eigen::MatrixXd::Ones(source_size, 1));
}

bool MarkovKernel::is_deterministic(double tol) const {
  return (rows_.array().abs() <= tol || (rows_.array() - 1.0).abs() <= tol).all();
}

WeakMarkovKernel::WeakMarkovKernel(Eigen::MatrixXd rows, std::vector<bool> support_mask)
    : rows_(std::move(rows)), mask_(std::move(support_mask)) {
  if (static_cast<Index>(mask_.size()) != rows_.rows())
    throw Error(Errc::DimMismatch, "weak kernel: mask has " + std::to_string(mask_.size()) +
                                       " entries for " + std::to_string(rows_.rows()) + " rows");
  for (Index i = 0; i < rows_.rows(); ++i) {
    if (!mask_[static_cast<std::size_t>(i)]) continue;
    auto row = rows_.row(i);
    if (!row.allFinite() || row.minCoeff() < -kEntrySlack || row.maxCoeff() > 1.0 + kEntrySlack)
      throw Error(Errc::InvalidKernel, "weak kernel: masked row " + std::to_string(i) + " outside [0,1]");
    row = row.cwiseMax(0.0).cwiseMin(1.0);
    const double s = row.sum();
    if (std::abs(s - 1.0) > kRowSumSlack)
      throw Error(Errc::InvalidKernel,
                  "weak kernel: masked row " + std::to_string(i) + " sums to " + std::to_string(s));
    if (s != 1.0) row /= s;
  }
}

MarkovKernel WeakMarkovKernel::regularized() const {
  Eigen::MatrixXd rows = rows_;
  for (Index i = 0; i < rows.rows(); ++i) {
    if (mask_[static_cast<std::size_t>(i)]) continue;
    rows.row(i).setZero();
    rows(i, 0) = 1.0;
  }
  return MarkovKernel(std::move(rows));
}

MarkovKernel compose(const MarkovKernel& nu1, const MarkovKernel& nu2) {
  if (nu1.target_size() != nu2.source_size())
    throw Error(Errc::DimMismatch, "compose: " + shape(nu1.source_size(), nu1.target_size()) +
                                       " then " + shape(nu2.source_size(), nu2.target_size()));
  return MarkovKernel(nu1.matrix() * nu2.matrix());
}

MarkovKernel deterministic_kernel(std::span<const double> source, std::span<const double> target,
                                  const LabelMap& f) {
  std::vector<Index> index_map;
  index_map.reserve(source.size());
  for (double x : source) {
    const auto it = f.find(x);
    if (it == f.end())
      throw Error(Errc::PartialFunction, "deterministic_kernel: no image for label " + std::to_string(x));
    const auto pos = std::find(target.begin(), target.end(), it->second);
    if (pos == target.end())
      throw Error(Errc::PartialFunction,
                  "deterministic_kernel: image " + std::to_string(it->second) + " is not a target label");
    index_map.push_back(static_cast<Index>(pos - target.begin()));
  }
  return deterministic_kernel(index_map, static_cast<Index>(target.size()));
}

MarkovKernel deterministic_kernel(std::span<const Index> index_map, Index target_size) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Index>(index_map.size()), target_size);
  for (std::size_t i = 0; i < index_map.size(); ++i) {
    if (index_map[i] < 0 || index_map[i] >= target_size)
      throw Error(Errc::PartialFunction, "deterministic_kernel: index " + std::to_string(index_map[i]) +
                                             " outside the target");
    rows(static_cast<Index>(i), index_map[i]) = 1.0;
  }
  return MarkovKernel(std::move(rows));
}

Observable smear(const Observable& xi, const MarkovKernel& nu, std::optional<std::vector<double>> target_labels) {
  if (nu.source_size() != static_cast<Index>(xi.size()))
    throw Error(Errc::DimMismatch, "smear: kernel has " + std::to_string(nu.source_size()) +
                                       " rows for " + std::to_string(xi.size()) + " atoms");
  std::vector<double> labels;
  if (target_labels) {
    if (static_cast<Index>(target_labels->size()) != nu.target_size())
      throw Error(Errc::DimMismatch, "smear: " + std::to_string(target_labels->size()) +
                                         " target labels for " + std::to_string(nu.target_size()) + " columns");
    labels = std::move(*target_labels);
  } else {
    for (Index j = 0; j < nu.target_size(); ++j) labels.push_back(static_cast<double>(j));
  }
  std::vector<Effect> atoms;
  atoms.reserve(labels.size());
  std::vector<double> weights(xi.size());
  for (Index j = 0; j < nu.target_size(); ++j) {
    for (std::size_t i = 0; i < xi.size(); ++i) weights[i] = nu(static_cast<Index>(i), j);
    atoms.push_back(weighted_sum(xi.atoms(), weights));
  }
  return make_observable(std::move(labels), std::move(atoms));
}

Eigen::VectorXd apply_to_measure(const MarkovKernel& nu, const Eigen::VectorXd& p) {
  if (p.size() != nu.source_size())
    throw Error(Errc::DimMismatch, "apply_to_measure: measure of size " + std::to_string(p.size()) +
                                       " for kernel " + shape(nu.source_size(), nu.target_size()));
  const Eigen::VectorXd q = checked_probability(p);
  return (q.transpose() * nu.matrix()).transpose();
}

Eigen::VectorXd apply_to_measure(const WeakMarkovKernel& nu, const Eigen::VectorXd& p) {
  if (p.size() != nu.source_size())
    throw Error(Errc::DimMismatch, "apply_to_measure: measure of size " + std::to_string(p.size()) +
                                       " for kernel " + shape(nu.source_size(), nu.target_size()));
  const Eigen::VectorXd q = checked_probability(p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nu.target_size());
  for (Index i = 0; i < q.size(); ++i) {
    if (q(i) == 0.0) continue;
    if (!nu.in_support(i))
      throw Error(Errc::MaskViolation,
                  "apply_to_measure: measure charges row " + std::to_string(i) + " outside the support mask");
    out += q(i) * nu.matrix().row(i).transpose();
  }
  return out;
}

WeakMarkovKernel reverse_kernel(const MarkovKernel& nu, const Eigen::VectorXd& p) {
  if (p.size() != nu.source_size())
    throw Error(Errc::DimMismatch, "reverse_kernel: measure of size " + std::to_string(p.size()) +
                                       " for kernel " + shape(nu.source_size(), nu.target_size()));
  const Eigen::VectorXd q = checked_probability(p);
  const Eigen::VectorXd image = (q.transpose() * nu.matrix()).transpose();
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(nu.target_size(), nu.source_size());
  std::vector<bool> mask(static_cast<std::size_t>(nu.target_size()), false);
  for (Index j = 0; j < nu.target_size(); ++j) {
    if (image(j) <= 0.0) continue;
    mask[static_cast<std::size_t>(j)] = true;
    for (Index i = 0; i < nu.source_size(); ++i) rows(j, i) = q(i) * nu(i, j) / image(j);
  }
  return WeakMarkovKernel(std::move(rows), std::move(mask));
}

ProductMeasure product_measure(const Eigen::VectorXd& p, const MarkovKernel& nu) {
  if (p.size() != nu.source_size())
    throw Error(Errc::DimMismatch, "product_measure: measure of size " + std::to_string(p.size()) +
                                       " for kernel " + shape(nu.source_size(), nu.target_size()));
  const Eigen::VectorXd q = checked_probability(p);
  ProductMeasure out{q.asDiagonal() * nu.matrix()};
  return out;
}

}  // namespace povcal
