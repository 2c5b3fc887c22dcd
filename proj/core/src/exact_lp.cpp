#include "gopt/exact_lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "network_simplex.hpp"

namespace gopt {

namespace {

double stable_sum(const std::vector<double>& xs) {
  long double s = 0.0L;
  for (double x : xs) s += x;
  return static_cast<double>(s);
}

}  // namespace

BalancedOtProblem::BalancedOtProblem(Matrix cost_, std::vector<double> row_masses_,
                                     std::vector<double> col_masses_)
    : cost(std::move(cost_)),
      row_masses(std::move(row_masses_)),
      col_masses(std::move(col_masses_)) {
  if (cost.rows() != static_cast<int>(row_masses.size()) ||
      cost.cols() != static_cast<int>(col_masses.size()))
    throw std::invalid_argument("BalancedOtProblem: dimension mismatch");
  if (!cost.all_finite()) throw std::invalid_argument("BalancedOtProblem: non-finite cost");
  for (double x : row_masses)
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("BalancedOtProblem: row masses must be finite and >= 0");
  for (double x : col_masses)
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("BalancedOtProblem: col masses must be finite and >= 0");
  const double sr = stable_sum(row_masses);
  const double sc = stable_sum(col_masses);
  if (std::abs(sr - sc) > 1e-9 * std::max({1.0, sr, sc}))
    throw std::invalid_argument("BalancedOtProblem: unbalanced masses (" + std::to_string(sr) +
                                " vs " + std::to_string(sc) + ")");
}

BalancedOtSolution solve_balanced_ot(const BalancedOtProblem& problem) {
  // Rescale the column masses so both sides sum to the same value up to
  // machine precision; the residual imbalance ends up as dust on the
  // artificial arcs and never reaches the plan.
  std::vector<double> demand = problem.col_masses;
  const long double sr = [&] {
    long double s = 0.0L;
    for (double x : problem.row_masses) s += x;
    return s;
  }();
  const long double sc = [&] {
    long double s = 0.0L;
    for (double x : demand) s += x;
    return s;
  }();
  if (sc > 0.0L) {
    const long double scale = sr / sc;
    for (double& d : demand) d = static_cast<double>(d * scale);
  }

  detail::TransportResult r =
      detail::transport_network_simplex(problem.cost, problem.row_masses, demand);

  BalancedOtSolution out;
  out.plan = std::move(r.plan);
  out.value = r.value;
  out.row_prices = std::move(r.row_prices);
  out.col_prices = std::move(r.col_prices);
  out.pivots = r.pivots;
  return out;
}

AugmentedProblem build_augmented(const GoptProblem& problem) {
  if (problem.penalty1 != PenaltyKind::PTV || problem.penalty2 != PenaltyKind::PTV)
    throw std::invalid_argument(
        "build_augmented: the balanced-OT reduction applies to PTV penalties only; "
        "use the sinkhorn solver or the oracle LP for TV");

  const int n = problem.n();
  const int m = problem.m();
  AugmentedProblem aug;
  aug.c_hat = Matrix(n + 1, m + 1, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      aug.c_hat(i, j) = problem.cost(i, j) - problem.lambda1[i] - problem.lambda2[j];

  aug.p_hat = problem.p.weights();
  aug.p_hat.push_back(problem.q.total_mass());
  aug.q_hat = problem.q.weights();
  aug.q_hat.push_back(problem.p.total_mass());
  return aug;
}

SolveReport solve_gopt_lp(const GoptProblem& problem) {
  const AugmentedProblem aug = build_augmented(problem);
  BalancedOtSolution sol =
      solve_balanced_ot(BalancedOtProblem(aug.c_hat, aug.p_hat, aug.q_hat));

  const int n = problem.n();
  const int m = problem.m();
  Matrix block(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) block(i, j) = sol.plan(i, j);

  SolveReport report{TransportPlan(std::move(block))};

  // Two routes to the objective: direct evaluation of the block, and the
  // augmented value plus the constant penalty mass terms.
  const ObjectiveParts parts = gopt_primal_objective(problem, report.plan);
  double constant = 0.0;
  for (int i = 0; i < n; ++i) constant += problem.lambda1[i] * problem.p.weight(i);
  for (int j = 0; j < m; ++j) constant += problem.lambda2[j] * problem.q.weight(j);
  const double via_augmented = sol.value + constant;
  if (!(std::abs(parts.total - via_augmented) <= 1e-7 * std::max(1.0, std::abs(parts.total))))
    throw std::logic_error("solve_gopt_lp: objective cross-check failed (" +
                           std::to_string(parts.total) + " vs " + std::to_string(via_augmented) +
                           ")");

  double dual = constant;
  for (int i = 0; i <= n; ++i) dual += sol.row_prices[i] * aug.p_hat[i];
  for (int j = 0; j <= m; ++j) dual += sol.col_prices[j] * aug.q_hat[j];

  report.primal_value = parts.total;
  report.dual_value = dual;
  report.gap = parts.total - dual;
  report.iterations = sol.pivots;
  report.converged = true;
  return report;
}

bool check_support_pruning(const GoptProblem& problem, const TransportPlan& plan,
                           double eps_prime) {
  if (plan.rows() != problem.n() || plan.cols() != problem.m())
    throw std::invalid_argument("check_support_pruning: dimension mismatch");
  double offending_mass = 0.0;
  for (int i = 0; i < plan.rows(); ++i)
    for (int j = 0; j < plan.cols(); ++j) {
      const double slack = problem.cost(i, j) - problem.lambda1[i] - problem.lambda2[j];
      if (slack >= eps_prime) offending_mass += plan(i, j);
    }
  return offending_mass <= 1e-9;
}

SolveReport solve_sopt(const CostMatrix& cost, const DiscreteMeasure& p,
                       const DiscreteMeasure& q) {
  if (cost.rows() != p.size() || cost.cols() != q.size())
    throw std::invalid_argument("solve_sopt: dimension mismatch");
  if (q.total_mass() > p.total_mass() * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument("solve_sopt: requires |q| <= |p|");

  const double lambda2 = cost.entries().max_coeff() + 1.0;
  GoptProblem saturated(cost, p, q, std::vector<double>(p.size(), 0.0),
                        std::vector<double>(q.size(), lambda2), PenaltyKind::PTV,
                        PenaltyKind::PTV);
  SolveReport report = solve_gopt_lp(saturated);

  for (int j = 0; j < q.size(); ++j)
    if (std::abs(report.plan.col_marginal()[j] - q.weight(j)) > 1e-9)
      throw std::logic_error("solve_sopt: target marginal failed to saturate");

  double transport = 0.0;
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < q.size(); ++j) transport += cost(i, j) * report.plan(i, j);
  report.primal_value = transport;
  report.dual_value.reset();
  report.gap.reset();
  return report;
}

}  // namespace gopt
