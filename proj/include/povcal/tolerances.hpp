#pragma once

namespace povcal {

/// Numerical thresholds shared by every module. All comparisons in the
/// library are sup-norm unless stated otherwise.
struct Tolerances {
  double herm = 1e-9;      ///< hermiticity defect sup |a_ij - conj(a_ji)|
  double eig = 1e-9;       ///< eigendecomposition reconstruction
  double comm = 1e-9;      ///< commutator sup-norm
  double simdiag = 1e-9;   ///< off-diagonal defect after simultaneous diagonalization
  double psd = 1e-9;       ///< Loewner order slack
  double eq = 1e-8;        ///< matrix / effect equality
  double trace = 1e-9;     ///< density matrix normalization
  double feas = 1e-7;      ///< LP feasibility residual
  double suff = 1e-9;      ///< Hellinger preservation for sufficiency
  double cluster = 1e-7;   ///< eigenvalue gap that separates eigenspaces
  double rank = 1e-7;      ///< eigenvalues above this count toward rank
  double pivot = 1e-11;    ///< simplex pivot tolerance

  /// Scales the equality and feasibility thresholds (the `--tol` knob).
  [[nodiscard]] Tolerances scaled(double factor) const {
    Tolerances t = *this;
    t.eq *= factor;
    t.feas *= factor;
    return t;
  }
};

/// Process-wide tolerances. Set them once at startup, before any
/// concurrent use of the library.
const Tolerances& tolerances();
void set_tolerances(const Tolerances& t);

/// Restores the previous tolerances on scope exit.
class ScopedTolerances {
 public:
  explicit ScopedTolerances(const Tolerances& t) : saved_(tolerances()) { set_tolerances(t); }
  ~ScopedTolerances() { set_tolerances(saved_); }
  ScopedTolerances(const ScopedTolerances&) = delete;
  ScopedTolerances& operator=(const ScopedTolerances&) = delete;

 private:
  Tolerances saved_;
};

}  // namespace povcal
