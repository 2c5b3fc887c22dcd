#pragma once

#include <vector>

#include "gopt/matrix.hpp"
#include "gopt/measures.hpp"
#include "gopt/mopt.hpp"

namespace gopt {

/// An explicit dense LP: minimize objective . x subject to
/// eq_lhs x = eq_rhs, ineq_lhs x <= ineq_rhs, x >= 0. The reported optimum
/// includes `objective_constant`, so builders can fold constant penalty terms
/// into the LP value. Deliberately simple and slow: this module certifies the
/// production solvers on small instances.
struct DenseLp {
  std::vector<double> objective;
  Matrix eq_lhs;
  std::vector<double> eq_rhs;
  Matrix ineq_lhs;
  std::vector<double> ineq_rhs;
  double objective_constant = 0.0;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double value = 0.0;
};

/// Explicit LP for a GOPT instance. TV penalties are split into paired slack
/// variables; PTV penalties become marginal inequalities with the constant
/// part folded into objective_constant. Variables are laid out as the
/// row-major plan first, then TV slacks.
DenseLp lp_from_gopt(const GoptProblem& problem);

/// Explicit LP for a MOPT instance: marginal inequalities plus one total-mass
/// equality.
DenseLp lp_from_mopt(const MoptProblem& problem);

/// Explicit LP for SOPT: column marginals fixed to q, row marginals <= p.
DenseLp lp_from_sopt(const CostMatrix& cost, const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Explicit LP for balanced OT with both marginals fixed.
DenseLp lp_from_balanced_ot(const Matrix& cost, const std::vector<double>& row_masses,
                            const std::vector<double>& col_masses);

/// Two-phase dense tableau simplex with Bland's rule.
LpSolution simplex_solve(const DenseLp& lp);

}  // namespace gopt
