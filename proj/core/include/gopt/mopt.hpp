#pragma once

#include <span>
#include <vector>

#include "gopt/exact_lp.hpp"
#include "gopt/measures.hpp"
#include "gopt/report.hpp"

namespace gopt {

/// Mass-constrained partial transport: move exactly eta units of mass under
/// the partial marginal constraints row(gamma) <= p, col(gamma) <= q.
struct MoptProblem {
  CostMatrix cost;
  std::vector<double> p;
  std::vector<double> q;
  double eta = 0.0;

  MoptProblem(CostMatrix cost, std::vector<double> p, std::vector<double> q, double eta);

  int n() const { return static_cast<int>(p.size()); }
  int m() const { return static_cast<int>(q.size()); }
  double total_p() const;
  double total_q() const;
};

/// Augmented balanced-OT instance for MOPT: the dummy row/column absorb the
/// untransported mass, border costs are alpha and the corner max(c)+2a+b.
AugmentedProblem build_mopt_augmented(const MoptProblem& problem, double alpha, double beta);

/// Exact MOPT solve through the augmented balanced-OT reduction. The optimal
/// block is invariant to the (alpha, beta) choice.
SolveReport solve_mopt_lp(const MoptProblem& problem, double alpha = 0.0, double beta = 1.0);

/// KL (Bregman) projection onto {gamma : row sums <= p}: rows above their
/// budget are scaled down, feasible rows are left alone.
Matrix bregman_project_rows(const Matrix& gamma, std::span<const double> p);

/// KL projection onto {gamma : column sums <= q}.
Matrix bregman_project_cols(const Matrix& gamma, std::span<const double> q);

/// KL projection onto {gamma : total mass = eta}: a uniform rescale. eta = 0
/// degenerates to the zero matrix.
Matrix bregman_project_mass(const Matrix& gamma, double eta);

/// Dykstra's algorithm for the entropic MOPT problem min KL(gamma || K) over
/// the three constraint sets, cycling rows / columns / mass with correction
/// terms. Convergence requires the three constraint residuals and the
/// max-norm plan change to all drop below tol. Kernel entries are floored at
/// 1e-300 to keep the correction ratios finite; once max(cost)/epsilon goes
/// past ~700 the floor flattens the relative kernel weights and the plan,
/// while still feasible, drifts away from the entropic optimum.
SolveReport solve_emopt_dykstra(const MoptProblem& problem, double epsilon,
                                int max_iters = 50000, double tol = 1e-8);

}  // namespace gopt
