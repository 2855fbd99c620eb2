#pragma once

// Dense complex Hermitian matrix core: eigendecomposition, Loewner order,
// commutation tests and simultaneous diagonalization of commuting families.
//
// Everything here is templated on the Eigen matrix type, so the same code
// serves Eigen::MatrixXcd, Eigen::MatrixXcf, fixed-size matrices and
// expressions. Most of the library uses the CMatrix alias below.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "povcal/errors.hpp"
#include "povcal/tolerances.hpp"

namespace povcal {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using CMatrix = ComplexMatrix<double>;
using Index = Eigen::Index;

/// sup_{i,j} |a_ij|
template <typename Derived>
typename Derived::RealScalar sup_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return a.cwiseAbs().maxCoeff();
}

/// sup_{i,j} |a_ij - conj(a_ji)|
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  return sup_norm(a - a.adjoint());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = tolerances().herm) {
  return a.rows() == a.cols() && a.allFinite() &&
         hermiticity_defect(a) <= static_cast<typename Derived::RealScalar>(tol);
}

namespace detail {

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const char* who) {
  if (!a.allFinite()) throw Error(Errc::NonFinite, std::string(who) + ": non-finite entry");
  if (a.rows() != a.cols())
    throw Error(Errc::NonHermitian, std::string(who) + ": matrix is not square");
  if (!is_hermitian(a))
    throw Error(Errc::NonHermitian, std::string(who) + ": hermiticity defect " +
                                        std::to_string(static_cast<double>(hermiticity_defect(a))));
}

template <typename DerivedA, typename DerivedB>
void require_same_dim(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                      const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::DimMismatch, std::string(who) + ": " + std::to_string(a.rows()) + "x" +
                                       std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                       "x" + std::to_string(b.cols()));
}

// Rotates each column so that its first entry of maximal modulus is real and
// positive. Makes eigenvector output reproducible in sign and phase.
template <typename MatrixType>
void normalize_column_phases(MatrixType& v) {
  using RealScalar = typename Eigen::NumTraits<typename MatrixType::Scalar>::Real;
  for (Index c = 0; c < v.cols(); ++c) {
    Index best = 0;
    RealScalar best_abs = -1;
    for (Index r = 0; r < v.rows(); ++r) {
      const RealScalar m = std::abs(v(r, c));
      // Prefer the earliest index among near-equal moduli.
      if (m > best_abs + RealScalar(1e-12)) {
        best_abs = m;
        best = r;
      }
    }
    if (best_abs <= 0) continue;
    const auto phase = v(best, c) / best_abs;
    v.col(c) *= std::conj(phase);
    v(best, c) = best_abs;
  }
}

}  // namespace detail

/// Spectral decomposition A = U diag(eigenvalues) U*, eigenvalues ascending.
template <typename MatrixType>
struct EigenDecomposition {
  using RealScalar = typename Eigen::NumTraits<typename MatrixType::Scalar>::Real;
  Eigen::Matrix<RealScalar, Eigen::Dynamic, 1> eigenvalues;
  MatrixType vectors;
};

/// Hermitian eigendecomposition. Throws NonHermitian if `a` fails the
/// hermiticity check.
template <typename Derived>
EigenDecomposition<typename Derived::PlainObject> eig_h(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  detail::require_hermitian(a, "eig_h");
  // The solver only reads the lower triangle; symmetrize so both halves count.
  const Plain sym = (a + a.adjoint()) / typename Derived::RealScalar(2);
  Eigen::SelfAdjointEigenSolver<Plain> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::NumericalFailure, "eig_h: eigensolver did not converge");
  EigenDecomposition<Plain> out{solver.eigenvalues(), solver.eigenvectors()};
  detail::normalize_column_phases(out.vectors);
  return out;
}

/// Eigenvalues only, ascending.
template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1> eigenvalues_h(
    const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  detail::require_hermitian(a, "eigenvalues_h");
  const Plain sym = (a + a.adjoint()) / typename Derived::RealScalar(2);
  Eigen::SelfAdjointEigenSolver<Plain> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::NumericalFailure, "eigenvalues_h: eigensolver did not converge");
  return solver.eigenvalues();
}

/// Largest |eigenvalue|, i.e. the operator norm of a Hermitian matrix.
template <typename Derived>
typename Derived::RealScalar operator_norm_h(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return eigenvalues_h(a).cwiseAbs().maxCoeff();
}

/// Number of eigenvalues strictly above `threshold`.
template <typename Derived>
Index rank_h(const Eigen::MatrixBase<Derived>& a, double threshold = tolerances().rank) {
  const auto ev = eigenvalues_h(a);
  return static_cast<Index>(
      (ev.array() > static_cast<typename Derived::RealScalar>(threshold)).count());
}

/// A <= B in the Loewner order: min eigenvalue of B - A is >= -TOL_PSD.
template <typename DerivedA, typename DerivedB>
bool loewner_leq(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_same_dim(a, b, "loewner_leq");
  detail::require_hermitian(a, "loewner_leq");
  detail::require_hermitian(b, "loewner_leq");
  if (a.size() == 0) return true;
  const typename DerivedA::PlainObject diff = b - a;
  return eigenvalues_h(diff).minCoeff() >= -static_cast<typename DerivedA::RealScalar>(tolerances().psd);
}

/// ||AB - BA||_sup <= TOL_COMM.
template <typename DerivedA, typename DerivedB>
bool commutes(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_same_dim(a, b, "commutes");
  if (a.rows() != a.cols()) throw Error(Errc::DimMismatch, "commutes: matrices must be square");
  const typename DerivedA::PlainObject ab = a * b;
  const typename DerivedA::PlainObject ba = b * a;
  return sup_norm(ab - ba) <= static_cast<typename DerivedA::RealScalar>(tolerances().comm);
}

/// A common eigenbasis for a commuting family. Column x of `unitary` is the
/// basis vector whose joint eigenvalue tuple is (eigenvalues[0][x], ...,
/// eigenvalues[m-1][x]).
template <typename MatrixType>
struct SimultaneousEigenbasis {
  using RealScalar = typename Eigen::NumTraits<typename MatrixType::Scalar>::Real;
  MatrixType unitary;
  std::vector<Eigen::Matrix<RealScalar, Eigen::Dynamic, 1>> eigenvalues;
};

/// Deterministic sequential eigenspace refinement: diagonalize the first
/// matrix, split into eigenspaces (gaps > TOL cluster), then diagonalize the
/// compressions of the remaining matrices inside every eigenspace.
template <typename MatrixType>
SimultaneousEigenbasis<MatrixType> simultaneous_eigenbasis(std::span<const MatrixType> effects) {
  using RealScalar = typename Eigen::NumTraits<typename MatrixType::Scalar>::Real;
  using RealVector = Eigen::Matrix<RealScalar, Eigen::Dynamic, 1>;

  if (effects.empty()) throw Error(Errc::DimMismatch, "simultaneous_eigenbasis: empty family");
  const Index d = effects.front().rows();
  for (const auto& a : effects) {
    detail::require_same_dim(effects.front(), a, "simultaneous_eigenbasis");
    detail::require_hermitian(a, "simultaneous_eigenbasis");
  }
  for (std::size_t i = 0; i < effects.size(); ++i)
    for (std::size_t j = i + 1; j < effects.size(); ++j)
      if (!commutes(effects[i], effects[j]))
        throw Error(Errc::NotCommuting, "simultaneous_eigenbasis: matrices " + std::to_string(i) +
                                            " and " + std::to_string(j) + " do not commute");

  const auto gap = static_cast<RealScalar>(tolerances().cluster);
  MatrixType basis = MatrixType::Identity(d, d);
  // Column ranges [begin, end) of `basis` spanning a common eigenspace so far.
  std::vector<std::pair<Index, Index>> blocks{{0, d}};

  for (const auto& a : effects) {
    std::vector<std::pair<Index, Index>> refined;
    for (const auto& [begin, end] : blocks) {
      const Index width = end - begin;
      if (width == 1) {
        refined.emplace_back(begin, end);
        continue;
      }
      const MatrixType v = basis.middleCols(begin, width);
      const MatrixType compressed = v.adjoint() * a * v;
      const auto dec = eig_h(compressed);
      basis.middleCols(begin, width) = v * dec.vectors;
      Index start = 0;
      for (Index k = 1; k <= width; ++k) {
        if (k == width || dec.eigenvalues(k) - dec.eigenvalues(k - 1) > gap) {
          refined.emplace_back(begin + start, begin + k);
          start = k;
        }
      }
    }
    blocks = std::move(refined);
  }

  SimultaneousEigenbasis<MatrixType> out;
  out.unitary = std::move(basis);
  const auto tol = static_cast<RealScalar>(tolerances().simdiag);
  for (const auto& a : effects) {
    const MatrixType rotated = out.unitary.adjoint() * a * out.unitary;
    RealVector diag = rotated.diagonal().real();
    MatrixType off = rotated;
    off.diagonal().setZero();
    if (sup_norm(off) > tol)
      throw Error(Errc::DegeneracyResolutionFailed,
                  "simultaneous_eigenbasis: off-diagonal defect " +
                      std::to_string(static_cast<double>(sup_norm(off))));
    out.eigenvalues.push_back(std::move(diag));
  }
  return out;
}

template <typename MatrixType>
SimultaneousEigenbasis<MatrixType> simultaneous_eigenbasis(const std::vector<MatrixType>& effects) {
  return simultaneous_eigenbasis(std::span<const MatrixType>(effects));
}

}  // namespace povcal
