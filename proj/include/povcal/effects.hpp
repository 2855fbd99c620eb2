#pragma once

// Effect algebras with two concrete backends:
//   hilbert - effects 0 <= A <= I on C^d, a (+) b = A + B when A + B <= I;
//   tribe   - fuzzy sets f in [0,1]^n over a finite base set, a (+) b = f + g
//             when f + g <= 1 pointwise. n = 1 is the unit interval.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "povcal/hermit.hpp"

namespace povcal {

enum class Backend { hilbert, tribe };

std::string_view to_string(Backend b);

class Effect {
 public:
  /// Validates 0 <= a <= I. Eigenvalues within TOL_PSD outside [0,1] are
  /// clamped; larger violations throw InvalidEffect.
  static Effect hilbert(CMatrix a);
  /// Validates every coordinate in [0,1]; coordinates within TOL_PSD of the
  /// interval are clamped.
  static Effect tribe(Eigen::VectorXd f);
  static Effect zero(Backend backend, Index dim);
  static Effect one(Backend backend, Index dim);

  [[nodiscard]] Backend backend() const noexcept {
    return std::holds_alternative<CMatrix>(payload_) ? Backend::hilbert : Backend::tribe;
  }
  /// d for hilbert, size of the base set for tribe.
  [[nodiscard]] Index dim() const noexcept;

  /// Hilbert payload. Throws BackendMismatch on a tribe element.
  [[nodiscard]] const CMatrix& matrix() const;
  /// Tribe payload. Throws BackendMismatch on a hilbert element.
  [[nodiscard]] const Eigen::VectorXd& values() const;

 private:
  explicit Effect(CMatrix a) : payload_(std::move(a)) {}
  explicit Effect(Eigen::VectorXd f) : payload_(std::move(f)) {}

  std::variant<CMatrix, Eigen::VectorXd> payload_;
};

/// Throws BackendMismatch / DimMismatch unless a and b live in the same algebra.
void require_compatible(const Effect& a, const Effect& b, const char* who);

/// a (+) b, or nullopt when the sum exceeds the unit element.
std::optional<Effect> oplus(const Effect& a, const Effect& b);
/// 1 - a
Effect orthosupplement(const Effect& a);
/// b (-) a = b - a, defined for a <= b. Throws NotComparable otherwise.
Effect ominus(const Effect& b, const Effect& a);
bool partial_order_leq(const Effect& a, const Effect& b);
bool is_sharp(const Effect& a);

/// Greatest n such that the n-fold (+) of `a` exists; infinite iff a = 0.
struct IsotropicIndex {
  bool infinite = false;
  std::uint64_t value = 0;

  friend bool operator==(const IsotropicIndex&, const IsotropicIndex&) = default;
};

IsotropicIndex isotropic_index(const Effect& a);

/// sup-norm distance between the payloads.
double sup_distance(const Effect& a, const Effect& b);
bool approx_equal(const Effect& a, const Effect& b, double tol = tolerances().eq);

/// sum_i weights[i] * atoms[i], validated as an effect.
Effect weighted_sum(std::span<const Effect> atoms, std::span<const double> weights);

/// Minimal real encoding of an effect: for hilbert, the d diagonal entries,
/// then the real and imaginary parts of the strict upper triangle (row-major);
/// for tribe, the coordinates. Linear in the effect.
Eigen::VectorXd real_coordinates(const Effect& a);

/// Density matrix (hilbert) or probability vector on the base set (tribe).
class State {
 public:
  /// Hermitian, PSD within TOL_PSD, trace 1 within TOL_TRACE.
  static State density(CMatrix rho);
  /// Nonnegative weights summing to 1 within TOL_TRACE.
  static State probability(Eigen::VectorXd p);
  /// I/d or the uniform distribution.
  static State maximally_mixed(Backend backend, Index dim);

  [[nodiscard]] Backend backend() const noexcept {
    return std::holds_alternative<CMatrix>(payload_) ? Backend::hilbert : Backend::tribe;
  }
  [[nodiscard]] Index dim() const noexcept;
  /// Full rank / full support: min eigenvalue or min weight above 1e-9.
  [[nodiscard]] bool faithful() const noexcept { return faithful_; }

  [[nodiscard]] const CMatrix& matrix() const;
  [[nodiscard]] const Eigen::VectorXd& weights() const;

 private:
  State(CMatrix rho, bool faithful) : payload_(std::move(rho)), faithful_(faithful) {}
  State(Eigen::VectorXd p, bool faithful) : payload_(std::move(p)), faithful_(faithful) {}

  std::variant<CMatrix, Eigen::VectorXd> payload_;
  bool faithful_ = false;
};

/// m(a): trace(rho A) clamped to [0,1], or sum_x f(x) P(x) in index order.
double state_eval(const State& m, const Effect& a);

}  // namespace povcal
