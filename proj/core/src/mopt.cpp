#include "gopt/mopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gopt/sinkhorn.hpp"

namespace gopt {

namespace {

// Keeps every entry representable so the Dykstra correction ratios stay
// finite; with cost/epsilon below ~700 the floor is never reached.
constexpr double kGammaFloor = 1e-300;

double sum_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

double plan_cost(const Matrix& cost, const Matrix& plan) {
  double value = 0.0;
  for (int i = 0; i < cost.rows(); ++i)
    for (int j = 0; j < cost.cols(); ++j) value += cost(i, j) * plan(i, j);
  return value;
}

}  // namespace

MoptProblem::MoptProblem(CostMatrix cost_, std::vector<double> p_, std::vector<double> q_,
                         double eta_)
    : cost(std::move(cost_)), p(std::move(p_)), q(std::move(q_)), eta(eta_) {
  if (cost.rows() != n() || cost.cols() != m())
    throw std::invalid_argument("MoptProblem: cost dimensions do not match the masses");
  if (cost.entries().min_coeff() < 0.0)
    throw std::invalid_argument("MoptProblem: cost must be non-negative");
  for (double x : p)
    if (!std::isfinite(x) || x <= 0.0)
      throw std::invalid_argument("MoptProblem: p must be strictly positive");
  for (double x : q)
    if (!std::isfinite(x) || x <= 0.0)
      throw std::invalid_argument("MoptProblem: q must be strictly positive");
  const double cap = std::min(total_p(), total_q());
  if (!std::isfinite(eta) || eta < 0.0 || eta > cap * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument("MoptProblem: eta must lie in [0, min(|p|, |q|)]");
  eta = std::min(eta, cap);
}

double MoptProblem::total_p() const { return sum_of(p); }
double MoptProblem::total_q() const { return sum_of(q); }

AugmentedProblem build_mopt_augmented(const MoptProblem& problem, double alpha, double beta) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("build_mopt_augmented: alpha must be finite and >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("build_mopt_augmented: beta must be finite and > 0");

  const int n = problem.n();
  const int m = problem.m();
  const double max_cost = problem.cost.entries().max_coeff();

  AugmentedProblem aug;
  aug.c_hat = Matrix(n + 1, m + 1, alpha);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) aug.c_hat(i, j) = problem.cost(i, j);
  aug.c_hat(n, m) = max_cost + 2.0 * alpha + beta;

  aug.p_hat = problem.p;
  aug.p_hat.push_back(std::max(0.0, problem.total_q() - problem.eta));
  aug.q_hat = problem.q;
  aug.q_hat.push_back(std::max(0.0, problem.total_p() - problem.eta));
  return aug;
}

SolveReport solve_mopt_lp(const MoptProblem& problem, double alpha, double beta) {
  const AugmentedProblem aug = build_mopt_augmented(problem, alpha, beta);
  BalancedOtSolution sol =
      solve_balanced_ot(BalancedOtProblem(aug.c_hat, aug.p_hat, aug.q_hat));

  const int n = problem.n();
  const int m = problem.m();
  Matrix block(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) block(i, j) = sol.plan(i, j);

  SolveReport report{TransportPlan(std::move(block))};

  const double scale = std::max(1.0, std::max(problem.total_p(), problem.total_q()));
  if (std::abs(report.plan.total_mass() - problem.eta) > 1e-9 * scale)
    throw std::logic_error("solve_mopt_lp: transported mass missed eta");
  for (int i = 0; i < n; ++i)
    if (report.plan.row_marginal()[i] > problem.p[i] + 1e-9 * scale)
      throw std::logic_error("solve_mopt_lp: row marginal exceeds p");
  for (int j = 0; j < m; ++j)
    if (report.plan.col_marginal()[j] > problem.q[j] + 1e-9 * scale)
      throw std::logic_error("solve_mopt_lp: col marginal exceeds q");

  report.primal_value = plan_cost(problem.cost.entries(), report.plan.matrix());
  report.iterations = sol.pivots;
  report.converged = true;
  return report;
}

Matrix bregman_project_rows(const Matrix& gamma, std::span<const double> p) {
  if (gamma.rows() != static_cast<int>(p.size()))
    throw std::invalid_argument("bregman_project_rows: dimension mismatch");
  Matrix out = gamma;
  for (int i = 0; i < gamma.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < gamma.cols(); ++j) row += gamma(i, j);
    const double scale = row > 0.0 ? std::min(p[i] / row, 1.0) : 1.0;
    if (scale < 1.0)
      for (int j = 0; j < gamma.cols(); ++j) out(i, j) = gamma(i, j) * scale;
  }
  return out;
}

Matrix bregman_project_cols(const Matrix& gamma, std::span<const double> q) {
  if (gamma.cols() != static_cast<int>(q.size()))
    throw std::invalid_argument("bregman_project_cols: dimension mismatch");
  Matrix out = gamma;
  for (int j = 0; j < gamma.cols(); ++j) {
    double col = 0.0;
    for (int i = 0; i < gamma.rows(); ++i) col += gamma(i, j);
    const double scale = col > 0.0 ? std::min(q[j] / col, 1.0) : 1.0;
    if (scale < 1.0)
      for (int i = 0; i < gamma.rows(); ++i) out(i, j) = gamma(i, j) * scale;
  }
  return out;
}

Matrix bregman_project_mass(const Matrix& gamma, double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("bregman_project_mass: eta must be >= 0");
  if (eta == 0.0) return Matrix(gamma.rows(), gamma.cols(), 0.0);
  const double total = gamma.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("bregman_project_mass: gamma must carry positive mass");
  Matrix out = gamma;
  const double scale = eta / total;
  for (double& x : out.data()) x *= scale;
  return out;
}

SolveReport solve_emopt_dykstra(const MoptProblem& problem, double epsilon, int max_iters,
                                double tol) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solve_emopt_dykstra: epsilon must be > 0");
  if (max_iters <= 0) throw std::invalid_argument("solve_emopt_dykstra: max_iters must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_emopt_dykstra: tol must be > 0");

  const int n = problem.n();
  const int m = problem.m();

  if (problem.eta == 0.0) {
    SolveReport report{TransportPlan(Matrix(n, m, 0.0))};
    report.primal_value = 0.0;
    report.iterations = 0;
    report.converged = true;
    return report;
  }

  Matrix gamma = gibbs_kernel(problem.cost, epsilon);
  for (double& x : gamma.data()) x = std::max(x, kGammaFloor);
  {
    const double scale = problem.eta / gamma.sum();
    for (double& x : gamma.data()) x = std::max(x * scale, kGammaFloor);
  }

  Matrix xi1(n, m, 1.0), xi2(n, m, 1.0), xi3(n, m, 1.0);
  bool converged = false;
  int sweeps = 0;

  auto project_step = [&](Matrix& xi, int which) {
    Matrix input = gamma;
    for (std::size_t k = 0; k < input.size(); ++k) input.data()[k] *= xi.data()[k];
    Matrix next = which == 0   ? bregman_project_rows(input, problem.p)
                  : which == 1 ? bregman_project_cols(input, problem.q)
                               : bregman_project_mass(input, problem.eta);
    for (double& x : next.data()) x = std::max(x, kGammaFloor);
    for (std::size_t k = 0; k < next.size(); ++k)
      xi.data()[k] *= gamma.data()[k] / next.data()[k];
    gamma = std::move(next);
  };

  Matrix prev = gamma;
  for (int sweep = 1; sweep <= max_iters; ++sweep) {
    project_step(xi1, 0);
    project_step(xi2, 1);
    project_step(xi3, 2);
    sweeps = sweep;

    double residual = std::abs(gamma.sum() - problem.eta);
    const std::vector<double> rows = gamma.row_sums();
    const std::vector<double> cols = gamma.col_sums();
    for (int i = 0; i < n; ++i) residual = std::max(residual, rows[i] - problem.p[i]);
    for (int j = 0; j < m; ++j) residual = std::max(residual, cols[j] - problem.q[j]);

    double change = 0.0;
    for (std::size_t k = 0; k < gamma.size(); ++k)
      change = std::max(change, std::abs(gamma.data()[k] - prev.data()[k]));
    prev = gamma;

    if (std::max(residual, change) < tol) {
      converged = true;
      break;
    }
  }

  SolveReport report{TransportPlan(std::move(gamma))};
  report.primal_value = plan_cost(problem.cost.entries(), report.plan.matrix());
  report.iterations = sweeps;
  report.converged = converged;
  return report;
}

}  // namespace gopt
