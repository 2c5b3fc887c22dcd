#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "gopt/exact_lp.hpp"
#include "gopt/mopt.hpp"
#include "gopt/oracle.hpp"
#include "gopt/sinkhorn.hpp"

namespace gopt::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kPlanCutoff = 1e-12;

DiscreteMeasure make_measure(const std::vector<double>& weights,
                             const std::optional<std::vector<Point>>& points) {
  try {
    if (points) return DiscreteMeasure(weights, *points);
    return DiscreteMeasure(weights);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
}

GoptProblem make_gopt_problem(const ProblemFile& file) {
  if (!file.lambda1 || !file.lambda2)
    throw ParseError("problem file: solver '" + file.solver +
                     "' requires 'lambda1' and 'lambda2'");
  try {
    return GoptProblem(build_cost(file), make_measure(file.p_weights, file.p_points),
                       make_measure(file.q_weights, file.q_points), *file.lambda1, *file.lambda2,
                       file.penalty1, file.penalty2);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
}

MoptProblem make_mopt_problem(const ProblemFile& file) {
  if (!file.eta)
    throw ParseError("problem file: solver '" + file.solver + "' requires 'eta'");
  try {
    return MoptProblem(build_cost(file), file.p_weights, file.q_weights, *file.eta);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
}

ordered_json plan_triplets(const TransportPlan& plan) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < plan.rows(); ++i)
    for (int j = 0; j < plan.cols(); ++j)
      if (plan(i, j) >= kPlanCutoff) out.push_back({i, j, plan(i, j)});
  return out;
}

ordered_json marginal_residuals(const TransportPlan& plan, const std::vector<double>& p,
                                const std::vector<double>& q) {
  double row_max = 0.0, col_max = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    row_max = std::max(row_max, std::abs(plan.row_marginal()[i] - p[i]));
  for (std::size_t j = 0; j < q.size(); ++j)
    col_max = std::max(col_max, std::abs(plan.col_marginal()[j] - q[j]));
  return ordered_json{{"row_max", row_max}, {"col_max", col_max}};
}

ordered_json base_report(const std::string& solver, const ObjectiveParts& parts,
                         const SolveReport& result, const std::vector<double>& p,
                         const std::vector<double>& q) {
  ordered_json report;
  report["version"] = 1;
  report["solver"] = solver;
  report["objective"] = ordered_json{{"transport", parts.transport},
                                     {"penalty1", parts.penalty1},
                                     {"penalty2", parts.penalty2},
                                     {"total", parts.total}};
  if (result.dual_value) report["dual_value"] = *result.dual_value;
  if (result.gap) report["gap"] = *result.gap;
  report["iterations"] = result.iterations;
  report["converged"] = result.converged;
  report["total_mass"] = result.plan.total_mass();
  report["plan"] = plan_triplets(result.plan);
  report["marginal_residuals"] = marginal_residuals(result.plan, p, q);
  return report;
}

ObjectiveParts transport_only(const CostMatrix& cost, const TransportPlan& plan) {
  ObjectiveParts parts;
  for (int i = 0; i < plan.rows(); ++i)
    for (int j = 0; j < plan.cols(); ++j) parts.transport += cost(i, j) * plan(i, j);
  parts.total = parts.transport;
  return parts;
}

// Deterministic uniform generator shared by the selftest instance list.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace

RunOutcome run_problem(const ProblemFile& file) {
  RunOutcome out;
  const std::string& solver = file.solver;

  if (solver == "sinkhorn") {
    GoptProblem problem = make_gopt_problem(file);
    EntropicConfig config;
    config.epsilon = file.epsilon;
    config.tol = file.tol;
    config.max_iters = file.max_iters;
    config.validate();
    SolveReport result = solve_egopt(problem, config);
    // Entropic plans satisfy hard marginal constraints only up to the
    // convergence tolerance; evaluate the decomposition with that slack.
    const double mass_scale =
        std::max(1.0, std::max(problem.p.total_mass(), problem.q.total_mass()));
    const double slack = convergence_feasibility_slack(config, mass_scale);
    out.report = base_report(solver, gopt_primal_objective(problem, result.plan, slack), result,
                             file.p_weights, file.q_weights);
    out.converged = result.converged;
  } else if (solver == "lp") {
    GoptProblem problem = make_gopt_problem(file);
    SolveReport result = [&] {
      try {
        return solve_gopt_lp(problem);
      } catch (const std::invalid_argument& e) {
        throw SolverRejection(std::string(e.what()) +
                              " (try \"--solver sinkhorn\" or \"--solver oracle\")");
      }
    }();
    out.report = base_report(solver, gopt_primal_objective(problem, result.plan), result,
                             file.p_weights, file.q_weights);
  } else if (solver == "oracle") {
    GoptProblem problem = make_gopt_problem(file);
    const DenseLp lp = lp_from_gopt(problem);
    const LpSolution solution = simplex_solve(lp);
    if (solution.status != LpStatus::Optimal)
      throw SolverRejection("oracle simplex did not reach an optimum (formulation bug)");
    const int n = problem.n(), m = problem.m();
    Matrix plan(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) plan(i, j) = solution.x[i * m + j];
    SolveReport result{TransportPlan(std::move(plan))};
    result.primal_value = solution.value;
    result.converged = true;
    out.report = base_report(solver, gopt_primal_objective(problem, result.plan), result,
                             file.p_weights, file.q_weights);
  } else if (solver == "sopt") {
    CostMatrix cost = build_cost(file);
    DiscreteMeasure p = make_measure(file.p_weights, file.p_points);
    DiscreteMeasure q = make_measure(file.q_weights, file.q_points);
    SolveReport result = [&] {
      try {
        return solve_sopt(cost, p, q);
      } catch (const std::invalid_argument& e) {
        throw SolverRejection(e.what());
      }
    }();
    out.report = base_report(solver, transport_only(cost, result.plan), result, file.p_weights,
                             file.q_weights);
  } else if (solver == "mopt-lp") {
    MoptProblem problem = make_mopt_problem(file);
    SolveReport result = [&] {
      try {
        return solve_mopt_lp(problem, file.alpha, file.beta);
      } catch (const std::invalid_argument& e) {
        throw SolverRejection(e.what());
      }
    }();
    out.report = base_report(solver, transport_only(problem.cost, result.plan), result,
                             file.p_weights, file.q_weights);
    out.report["eta_residual"] = std::abs(result.plan.total_mass() - problem.eta);
  } else if (solver == "mopt-dykstra") {
    MoptProblem problem = make_mopt_problem(file);
    SolveReport result = [&] {
      try {
        return solve_emopt_dykstra(problem, file.epsilon, file.max_iters, file.tol);
      } catch (const std::invalid_argument& e) {
        throw SolverRejection(e.what());
      }
    }();
    out.report = base_report(solver, transport_only(problem.cost, result.plan), result,
                             file.p_weights, file.q_weights);
    out.report["eta_residual"] = std::abs(result.plan.total_mass() - problem.eta);
    out.converged = result.converged;
  } else {
    throw ParseError("unknown solver '" + solver +
                     "' (expected sinkhorn, lp, mopt-lp, mopt-dykstra, sopt or oracle)");
  }
  return out;
}

int run_selftest(std::ostream& os) {
  constexpr int kInstances = 10;
  constexpr double kEpsilon = 0.01;
  SplitMix64 rng(0x5309a1d6u);

  bool all_ok = true;
  double worst_lp_oracle = 0.0;
  double worst_sinkhorn = 0.0;
  int worst_instance = -1;

  for (int t = 0; t < kInstances; ++t) {
    const int n = rng.uniform_int(2, 5);
    const int m = rng.uniform_int(2, 5);
    Matrix cost(n, m);
    for (double& x : cost.data()) x = rng.uniform(0.0, 5.0);
    std::vector<double> p(n), q(m), l1(n), l2(m);
    for (double& x : p) x = rng.uniform(0.3, 1.5);
    for (double& x : q) x = rng.uniform(0.3, 1.5);
    for (double& x : l1) x = rng.uniform(0.0, 4.0);
    for (double& x : l2) x = rng.uniform(0.0, 4.0);

    GoptProblem problem(CostMatrix::from_matrix(cost), DiscreteMeasure(p), DiscreteMeasure(q), l1,
                        l2, PenaltyKind::PTV, PenaltyKind::PTV);

    const SolveReport lp = solve_gopt_lp(problem);
    const LpSolution oracle = simplex_solve(lp_from_gopt(problem));

    EntropicConfig config;
    config.epsilon = kEpsilon;
    config.tol = 1e-10;
    config.max_iters = 200000;
    const SolveReport entropic = solve_egopt(problem, config);
    const double slack = convergence_feasibility_slack(config, 2.0);
    const ObjectiveParts parts = gopt_primal_objective(problem, entropic.plan, slack);

    const double lp_vs_oracle = std::abs(lp.primal_value - oracle.value);
    const double sink_vs_lp = std::abs(parts.total - lp.primal_value);
    const double sink_tol = std::max(1e-2, 5.0 * kEpsilon * n * m);
    const bool ok = oracle.status == LpStatus::Optimal && lp_vs_oracle <= 1e-7 &&
                    entropic.converged && sink_vs_lp <= sink_tol && *entropic.gap <= 1e-6;

    char line[256];
    std::snprintf(line, sizeof(line),
                  "instance %02d (%dx%d): lp=%.12f oracle=%.12f sinkhorn=%.12f gap=%.3e %s\n", t, n,
                  m, lp.primal_value, oracle.value, parts.total, *entropic.gap,
                  ok ? "ok" : "MISMATCH");
    os << line;

    if (!ok) all_ok = false;
    if (lp_vs_oracle > worst_lp_oracle || sink_vs_lp > worst_sinkhorn) {
      worst_lp_oracle = std::max(worst_lp_oracle, lp_vs_oracle);
      worst_sinkhorn = std::max(worst_sinkhorn, sink_vs_lp);
      worst_instance = t;
    }
  }

  char summary[160];
  std::snprintf(summary, sizeof(summary),
                "selftest %s: worst |lp-oracle|=%.3e worst |sinkhorn-lp|=%.3e (instance %02d)\n",
                all_ok ? "passed" : "FAILED", worst_lp_oracle, worst_sinkhorn, worst_instance);
  os << summary;
  return all_ok ? 0 : 1;
}

}  // namespace gopt::cli
