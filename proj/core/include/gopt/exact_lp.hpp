#pragma once

#include <vector>

#include "gopt/matrix.hpp"
#include "gopt/measures.hpp"
#include "gopt/report.hpp"

namespace gopt {

/// Balanced transportation instance. Costs may be negative (the augmented
/// matrices are); total row mass must equal total column mass within 1e-9
/// relative. Masses of zero are tolerated so that degenerate augmented
/// instances (eta at its extreme values) stay solvable.
struct BalancedOtProblem {
  Matrix cost;
  std::vector<double> row_masses;
  std::vector<double> col_masses;

  BalancedOtProblem(Matrix cost, std::vector<double> row_masses, std::vector<double> col_masses);
};

struct BalancedOtSolution {
  Matrix plan;
  double value = 0.0;
  std::vector<double> row_prices;  // alpha
  std::vector<double> col_prices;  // beta
  int pivots = 0;
};

/// Exact min-cost transportation solve: network simplex on the dense
/// bipartite graph with Bland's anti-cycling pivot rule. Returns the optimal
/// plan together with dual prices satisfying complementary slackness.
BalancedOtSolution solve_balanced_ot(const BalancedOtProblem& problem);

/// One extra atom per side absorbing destroyed/created mass, reducing a
/// PTV/PTV GOPT instance to balanced OT.
struct AugmentedProblem {
  Matrix c_hat;                 // (n+1) x (m+1)
  std::vector<double> p_hat;    // length n+1
  std::vector<double> q_hat;    // length m+1
};

/// Augmented instance for a PTV/PTV GOPT problem: interior costs
/// c_ij - lambda1_i - lambda2_j, zero border, dummy masses |q| and |p|.
/// TV penalty kinds are rejected; use the sinkhorn solver or the oracle LP.
AugmentedProblem build_augmented(const GoptProblem& problem);

/// Exact GOPT solve (PTV/PTV) via the augmented reduction. The objective is
/// computed along two routes (direct evaluation of the block, and the
/// augmented value plus the constant penalty terms) and cross-checked.
SolveReport solve_gopt_lp(const GoptProblem& problem);

/// True iff the plan carries at most 1e-9 mass on entries where
/// c_ij - lambda1_i - lambda2_j >= eps_prime. Optimal plans must.
bool check_support_pruning(const GoptProblem& problem, const TransportPlan& plan,
                           double eps_prime);

/// Partial transport with the target marginal forced to equality: all of q
/// must be received, sourced from at most p. Requires |q| <= |p|. Solved as
/// GOPT with lambda1 = 0 and lambda2 = max(c)+1, which saturates the target.
SolveReport solve_sopt(const CostMatrix& cost, const DiscreteMeasure& p, const DiscreteMeasure& q);

}  // namespace gopt
