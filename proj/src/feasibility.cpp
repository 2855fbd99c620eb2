#include "povcal/feasibility.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace povcal {

namespace {

struct Standardized {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

Standardized assemble(const FeasibilityProblem& problem) {
  const Index n = problem.num_variables();
  const Index m_eq = problem.equalities.rows();
  if (problem.rhs.size() != m_eq)
    throw Error(Errc::DimMismatch, "solve_feasibility: " + std::to_string(m_eq) + " constraint rows, " +
                                       std::to_string(problem.rhs.size()) + " right-hand sides");
  if (!problem.rhs.allFinite() || !problem.equalities.allFinite())
    throw Error(Errc::NonFinite, "solve_feasibility: non-finite constraint data");
  const auto groups = static_cast<Index>(problem.simplex_groups.size());
  Standardized s{Eigen::MatrixXd::Zero(m_eq + groups, n), Eigen::VectorXd::Zero(m_eq + groups)};
  s.a.topRows(m_eq) = problem.equalities;
  s.b.head(m_eq) = problem.rhs;
  for (Index g = 0; g < groups; ++g) {
    for (Index v : problem.simplex_groups[static_cast<std::size_t>(g)]) {
      if (v < 0 || v >= n)
        throw Error(Errc::DimMismatch, "solve_feasibility: simplex group refers to variable " + std::to_string(v));
      s.a(m_eq + g, v) = 1.0;
    }
    s.b(m_eq + g) = 1.0;
  }
  return s;
}

double residual_of(const Standardized& s, const Eigen::VectorXd& x) {
  if (s.a.rows() == 0) return 0.0;
  return (s.a * x - s.b).cwiseAbs().maxCoeff();
}

}  // namespace

FeasibilityResult solve_feasibility(const FeasibilityProblem& problem) {
  const Standardized s = assemble(problem);
  const Index m = s.a.rows();
  const Index n = s.a.cols();
  const double pivot_tol = tolerances().pivot;
  const double feas_tol = tolerances().feas;

  FeasibilityResult result;
  if (m == 0) {
    result.status = Feasibility::feasible;
    result.x = Eigen::VectorXd::Zero(n);
    return result;
  }

  // Columns: n originals, m artificials, rhs. Last row: phase-1 reduced costs.
  const Index rhs = n + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  for (Index i = 0; i < m; ++i) {
    const double sign = s.b(i) < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * s.a.row(i);
    t(i, n + i) = 1.0;
    t(i, rhs) = sign * s.b(i);
  }
  t.row(m).head(n) = -t.topRows(m).leftCols(n).colwise().sum();
  t(m, rhs) = -t.col(rhs).head(m).sum();
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  const int max_pivots = static_cast<int>(50 * (m + n) + 1000);
  Eigen::RowVectorXd pivot_row(t.cols());
  Eigen::VectorXd column(t.rows());
  while (true) {
    // Bland: lowest-index original column with negative reduced cost.
    Index entering = -1;
    for (Index j = 0; j < n; ++j) {
      if (t(m, j) < -pivot_tol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;

    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m; ++i)
      if (t(i, entering) > pivot_tol) best_ratio = std::min(best_ratio, std::max(t(i, rhs), 0.0) / t(i, entering));
    // Bland: among (near-)tied rows, the one whose basic variable has the lowest index leaves.
    Index leaving = -1;
    const double tie = best_ratio + 1e-12 * (1.0 + best_ratio);
    for (Index i = 0; i < m; ++i) {
      if (t(i, entering) <= pivot_tol || std::max(t(i, rhs), 0.0) / t(i, entering) > tie) continue;
      if (leaving < 0 || basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leaving)]) leaving = i;
    }
    if (leaving < 0)
      throw Error(Errc::NumericalFailure, "solve_feasibility: unbounded phase-1 direction");

    if (++result.pivots > max_pivots)
      throw Error(Errc::NumericalFailure, "solve_feasibility: phase 1 stalled after " +
                                              std::to_string(max_pivots) + " pivots");

    pivot_row = t.row(leaving) / t(leaving, entering);
    column = t.col(entering);
    column(leaving) = 0.0;
    t.noalias() -= column * pivot_row;
    t.row(leaving) = pivot_row;
    t.col(entering).setZero();
    t(leaving, entering) = 1.0;
    for (Index i = 0; i < m; ++i)
      if (t(i, rhs) < 0.0 && t(i, rhs) > -1e-13) t(i, rhs) = 0.0;
    basis[static_cast<std::size_t>(leaving)] = entering;
  }

  double w = 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<Index> basic_columns;
  for (Index i = 0; i < m; ++i) {
    const Index v = basis[static_cast<std::size_t>(i)];
    if (v >= n) {
      w += std::abs(t(i, rhs));
    } else {
      x(v) = std::max(t(i, rhs), 0.0);
      basic_columns.push_back(v);
    }
  }
  result.phase1_objective = w;
  double residual = residual_of(s, x);

  // Re-solve the final basis against the original data to shed accumulated
  // tableau round-off.
  if (!basic_columns.empty() && residual > 0.0) {
    Eigen::MatrixXd sub(m, static_cast<Index>(basic_columns.size()));
    for (std::size_t k = 0; k < basic_columns.size(); ++k) sub.col(static_cast<Index>(k)) = s.a.col(basic_columns[k]);
    const Eigen::VectorXd xb = sub.colPivHouseholderQr().solve(s.b);
    if (xb.allFinite() && (xb.size() == 0 || xb.minCoeff() > -1e-12)) {
      Eigen::VectorXd refined = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < basic_columns.size(); ++k)
        refined(basic_columns[k]) = std::max(xb(static_cast<Index>(k)), 0.0);
      const double refined_residual = residual_of(s, refined);
      if (refined_residual < residual) {
        x = std::move(refined);
        residual = refined_residual;
      }
    }
  }

  result.residual = residual;
  if (residual <= feas_tol) {
    result.status = Feasibility::feasible;
    result.x = std::move(x);
    return result;
  }
  if (w > 10.0 * feas_tol) {
    result.status = Feasibility::infeasible;
    return result;
  }
  throw Error(Errc::NumericalFailure, "solve_feasibility: phase-1 optimum " + std::to_string(w) +
                                          " with residual " + std::to_string(residual) + " is inconclusive");
}

}  // namespace povcal
