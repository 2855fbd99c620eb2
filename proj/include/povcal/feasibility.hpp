#pragma once

// Phase-1 simplex feasibility for { x >= 0 : A x = b, sum_{g} x = 1 for every
// simplex group g }. Dense tableau, Bland's rule, fixed variable order.

#include <vector>

#include <Eigen/Dense>

#include "povcal/hermit.hpp"

namespace povcal {

struct FeasibilityProblem {
  Eigen::MatrixXd equalities;  ///< A, one row per constraint
  Eigen::VectorXd rhs;         ///< b
  /// Index groups whose variables must sum to one.
  std::vector<std::vector<Index>> simplex_groups;

  [[nodiscard]] Index num_variables() const noexcept { return equalities.cols(); }
};

enum class Feasibility { feasible, infeasible };

struct FeasibilityResult {
  Feasibility status = Feasibility::infeasible;
  Eigen::VectorXd x;              ///< the feasible point (empty when infeasible)
  double residual = 0.0;          ///< sup-norm residual of all constraints at x
  double phase1_objective = 0.0;  ///< sum of artificial variables at the phase-1 optimum
  int pivots = 0;

  [[nodiscard]] bool feasible() const noexcept { return status == Feasibility::feasible; }
};

/// Feasible when a point with sup-norm residual <= TOL_FEAS is found;
/// infeasible only when the phase-1 optimum exceeds 10 * TOL_FEAS. Anything
/// in between, or a stalled phase 1, throws NumericalFailure.
FeasibilityResult solve_feasibility(const FeasibilityProblem& problem);

}  // namespace povcal
