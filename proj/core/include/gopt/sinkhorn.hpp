#pragma once

#include <span>
#include <vector>

#include "gopt/matrix.hpp"
#include "gopt/measures.hpp"
#include "gopt/report.hpp"

namespace gopt {

/// Knobs for the scaling solver. tol is a max-norm threshold on the change of
/// the potentials (phi, psi) between sweeps, which keeps the stopping rule
/// independent of the epsilon scale. When a scaling vector drifts past
/// stabilization_threshold the potentials are absorbed into the kernel and
/// the scalings reset to one.
struct EntropicConfig {
  double epsilon = 0.1;
  int max_iters = 10000;
  double tol = 1e-9;
  double stabilization_threshold = 1e100;
  int gap_check_every = 10;

  void validate() const;
};

/// K = exp(-c/epsilon). Entries lie in (0, 1] for non-negative costs; at very
/// small epsilon entries can underflow to zero, which the solver compensates
/// for internally.
Matrix gibbs_kernel(const CostMatrix& cost, double epsilon);

/// TV proximal-divide update: clip(target/image, [e^{-lambda/eps}, e^{lambda/eps}]).
std::vector<double> proxdiv_tv(std::span<const double> marginal_target,
                               std::span<const double> kernel_image,
                               std::span<const double> lambda, double epsilon);

/// PTV proximal-divide update: min(target/image, e^{lambda/eps}).
std::vector<double> proxdiv_ptv(std::span<const double> marginal_target,
                                std::span<const double> kernel_image,
                                std::span<const double> lambda, double epsilon);

/// Source update for the saturated problem: min(target/image, 1). This is the
/// PTV update with lambda = 0.
std::vector<double> proxdiv_sopt_source(std::span<const double> marginal_target,
                                        std::span<const double> kernel_image);

/// Target update for the saturated problem: the plain balanced ratio
/// target/image.
std::vector<double> proxdiv_sopt_target(std::span<const double> marginal_target,
                                        std::span<const double> kernel_image);

/// Entropic GOPT solve: alternating proximal-divide updates on u and v with
/// log-domain stabilization. The reported primal is the entropic objective in
/// KL normalization (transport + eps*KL entropy + penalties), the dual is
/// dual_objective at the final potentials, and gap their difference.
SolveReport solve_egopt(const GoptProblem& problem, const EntropicConfig& config);

/// Entropic solve of the saturated problem (column marginal forced to q, row
/// marginal at most p): the lambda1 = 0 PTV update on the source paired with
/// the classical balanced update on the target. Requires |q| <= |p|.
SolveReport solve_esopt(const CostMatrix& cost, const DiscreteMeasure& p,
                        const DiscreteMeasure& q, const EntropicConfig& config);

/// Marginal violation a run converged at config.tol can still carry on hard
/// constraints: one potential step of tol scales marginals by e^{tol/eps}.
/// Use this as the feasibility tolerance when evaluating the unregularized
/// objective of an entropic plan.
double convergence_feasibility_slack(const EntropicConfig& config, double mass_scale);

/// Entropic dual objective
///   -eps * sum_ij (e^{(phi_i+psi_j)/eps} - 1) K_ij
///   + sum_i min(lambda1_i, phi_i) p_i + sum_j min(lambda2_j, psi_j) q_j.
/// A TV side additionally requires phi >= -lambda1 and phi = 0 where
/// lambda1 = 0 (the domain of the clipped update); violations beyond
/// feasibility_tol*(1+lambda) return -infinity. PTV sides are unconstrained.
double dual_objective(const GoptProblem& problem, const DualPotentials& potentials,
                      const Matrix& kernel, double feasibility_tol = 1e-9);

}  // namespace gopt
