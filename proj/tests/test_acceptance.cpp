// Acceptance suite: each test case covers one criterion end to end and
// prints a single PASS/FAIL line.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "gopt/divergence.hpp"
#include "gopt/exact_lp.hpp"
#include "gopt/mopt.hpp"
#include "gopt/oracle.hpp"
#include "gopt/sinkhorn.hpp"
#include "test_support.hpp"

using namespace gopt;
using gopt::testing::SplitMix64;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Criterion {
  const char* label;
  bool ok = true;
  explicit Criterion(const char* label_) : label(label_) {}
  bool note(bool condition) {
    ok = ok && condition;
    return condition;
  }
  ~Criterion() { std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", label); }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// The shared 200-instance family used by criteria 2 and 4.
std::vector<GoptProblem> identity_family() {
  SplitMix64 rng(0xACC2);
  std::vector<GoptProblem> out;
  out.reserve(200);
  for (int t = 0; t < 200; ++t) out.push_back(gopt::testing::random_gopt(rng, {}));
  return out;
}

EntropicConfig acceptance_config(double epsilon) {
  EntropicConfig config;
  config.epsilon = epsilon;
  config.tol = 1e-11;
  config.max_iters = 400000;
  return config;
}

}  // namespace

TEST_CASE("criterion 1: source duplication reproduction") {
  Criterion crit("criterion 1: source duplication instance (oracle + sinkhorn)");
  const auto start = std::chrono::steady_clock::now();

  const GoptProblem problem(make_cost_sq_euclidean({{0.0}}, {{0.0}, {1.0}}),
                            DiscreteMeasure({1.0}), DiscreteMeasure({1.0, 1.0}), {0.0},
                            {100.0, 100.0}, PenaltyKind::TV, PenaltyKind::TV);

  const LpSolution oracle = simplex_solve(lp_from_gopt(problem));
  CHECK(crit.note(oracle.status == LpStatus::Optimal));
  CHECK(crit.note(std::abs(oracle.value - 1.0) <= 1e-9));
  CHECK(crit.note(std::abs(oracle.x[0] - 1.0) <= 1e-9));
  CHECK(crit.note(std::abs(oracle.x[1] - 1.0) <= 1e-9));

  const TransportPlan oracle_plan(Matrix::from_rows({{oracle.x[0], oracle.x[1]}}));
  const ObjectiveParts oracle_parts = gopt_primal_objective(problem, oracle_plan);
  CHECK(crit.note(oracle_parts.penalty1 == 0.0));
  CHECK(crit.note(std::abs(oracle_parts.penalty2) <= 1e-9));
  // The optimal first marginal exceeds the source measure.
  CHECK(crit.note(oracle_plan.row_marginal()[0] > 1.0 + 0.5));

  const SolveReport entropic = solve_egopt(problem, acceptance_config(0.01));
  CHECK(crit.note(entropic.converged));
  const ObjectiveParts parts = gopt_primal_objective(problem, entropic.plan);
  CHECK(crit.note(std::abs(parts.total - oracle.value) <= 5e-2));
  CHECK(crit.note(std::abs(entropic.plan(0, 0) - 1.0) <= 5e-2));
  CHECK(crit.note(std::abs(entropic.plan(0, 1) - 1.0) <= 5e-2));

  CHECK(crit.note(seconds_since(start) < 1.0));
}

TEST_CASE("criterion 2: exact solver identity on 200 ptv instances") {
  Criterion crit("criterion 2: |augmented lp - simplex oracle| <= 1e-7 on 200 instances");
  const auto start = std::chrono::steady_clock::now();
  for (const GoptProblem& problem : identity_family()) {
    const SolveReport lp = solve_gopt_lp(problem);
    const LpSolution oracle = simplex_solve(lp_from_gopt(problem));
    CHECK(crit.note(oracle.status == LpStatus::Optimal));
    CHECK(crit.note(std::abs(lp.primal_value - oracle.value) <= 1e-7));
  }
  CHECK(crit.note(seconds_since(start) < 30.0));
}

TEST_CASE("criterion 3: entropic value approaches the lp value as epsilon drops") {
  Criterion crit("criterion 3: epsilon-convergence with small duality gaps");
  SplitMix64 rng(0xACC3);
  gopt::testing::GoptFamilyParams params;
  params.max_size = 5;
  params.cost_hi = 3.0;
  params.lambda_hi = 2.5;
  params.mass_lo = 0.2;
  params.mass_hi = 1.5;

  int monotone = 0;
  for (int t = 0; t < 10; ++t) {
    const GoptProblem problem = gopt::testing::random_gopt(rng, params);
    const double exact = solve_gopt_lp(problem).primal_value;

    std::vector<double> errors;
    double final_value = kInf;
    for (double eps : {1.0, 0.1, 0.01}) {
      const EntropicConfig config = acceptance_config(eps);
      const SolveReport r = solve_egopt(problem, config);
      CHECK(crit.note(r.converged));
      CHECK(crit.note(std::abs(*r.gap) <= 1e-6));
      const double slack = convergence_feasibility_slack(config, 2.0);
      const double value = gopt_primal_objective(problem, r.plan, slack).total;
      errors.push_back(std::abs(value - exact));
      final_value = value;
    }
    if (errors[0] >= errors[1] - 1e-9 && errors[1] >= errors[2] - 1e-9) ++monotone;
    const double tol = std::max(1e-2, 5.0 * 0.01 * problem.n() * problem.m());
    CHECK(crit.note(std::abs(final_value - exact) <= tol));
  }
  CHECK(crit.note(monotone >= 9));
}

TEST_CASE("criterion 4: optimal plans avoid positively-adjusted support") {
  Criterion crit("criterion 4: support pruning across the 200-instance family");
  for (const GoptProblem& problem : identity_family()) {
    const SolveReport lp = solve_gopt_lp(problem);
    CHECK(crit.note(check_support_pruning(problem, lp.plan, 1e-6)));
  }
}

TEST_CASE("criterion 5: saturation under dominating penalties") {
  Criterion crit("criterion 5: column marginal saturates when c - l1 - l2 < 0");
  SplitMix64 rng(0xACC5);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(2, 6), m = rng.uniform_int(2, 6);
    const Matrix cost = gopt::testing::random_matrix(rng, n, m, 0.0, 10.0);
    const double top = cost.max_coeff();
    std::vector<double> l1(n), l2(m);
    for (double& x : l1) x = top / 2 + rng.uniform(0.001, 1.0);
    for (double& x : l2) x = top / 2 + rng.uniform(0.01, 1.0);

    std::vector<double> p = gopt::testing::random_vector(rng, n, 0.1, 1.0);
    std::vector<double> q = gopt::testing::random_vector(rng, m, 0.1, 1.0);
    double sp = 0.0, sq = 0.0;
    for (double x : p) sp += x;
    for (double x : q) sq += x;
    if (sq > sp)
      for (double& x : q) x *= 0.9 * sp / sq;

    // The penalties strictly dominate every cost entry.
    double worst = -kInf;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) worst = std::max(worst, cost(i, j) - l1[i] - l2[j]);
    REQUIRE(worst < -1e-3);

    const GoptProblem problem(CostMatrix::from_matrix(cost), DiscreteMeasure(p),
                              DiscreteMeasure(q), l1, l2, PenaltyKind::PTV, PenaltyKind::PTV);
    const SolveReport r = solve_gopt_lp(problem);
    for (int j = 0; j < m; ++j)
      CHECK(crit.note(std::abs(r.plan.col_marginal()[j] - q[j]) <= 1e-9));
  }
}

TEST_CASE("criterion 6: saturated partial transport") {
  Criterion crit("criterion 6: sopt saturation, oracle identity and entropic match");
  SplitMix64 rng(0xACC6);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(2, 4), m = rng.uniform_int(2, 4);
    const CostMatrix cost =
        CostMatrix::from_matrix(gopt::testing::random_matrix(rng, n, m, 0.0, 2.0));
    const std::vector<double> p = gopt::testing::random_vector(rng, n, 0.5, 1.5);
    std::vector<double> q = gopt::testing::random_vector(rng, m, 0.5, 1.5);
    double sp = 0.0, sq = 0.0;
    for (double x : p) sp += x;
    for (double x : q) sq += x;
    const double fraction = rng.uniform(0.5, 0.9);
    for (double& x : q) x *= fraction * sp / sq;

    const DiscreteMeasure mp(p), mq(q);
    const SolveReport exact = solve_sopt(cost, mp, mq);
    for (int j = 0; j < m; ++j)
      CHECK(crit.note(std::abs(exact.plan.col_marginal()[j] - q[j]) <= 1e-9));

    const LpSolution oracle = simplex_solve(lp_from_sopt(cost, mp, mq));
    CHECK(crit.note(oracle.status == LpStatus::Optimal));
    CHECK(crit.note(std::abs(exact.primal_value - oracle.value) <= 1e-7));

    const SolveReport entropic = solve_esopt(cost, mp, mq, acceptance_config(0.01));
    CHECK(crit.note(entropic.converged));
    const double value =
        gopt::testing::transport_cost(cost.entries(), entropic.plan.matrix());
    CHECK(crit.note(std::abs(value - exact.primal_value) <= 5e-2));
  }
}

TEST_CASE("criterion 7: mass-constrained transport") {
  Criterion crit("criterion 7: mopt reduction invariance and dykstra feasibility");
  SplitMix64 rng(0xACC7);
  for (int t = 0; t < 50; ++t) {
    const MoptProblem problem =
        gopt::testing::random_mopt(rng, 6, 5.0, rng.uniform(0.2, 0.95));

    const SolveReport lp_a = solve_mopt_lp(problem, 0.0, 1.0);
    const SolveReport lp_b = solve_mopt_lp(problem, 2.0, 0.5);
    CHECK(crit.note(std::abs(lp_a.primal_value - lp_b.primal_value) <= 1e-9));

    const SolveReport dykstra = solve_emopt_dykstra(problem, 0.01, 400000, 1e-9);
    CHECK(crit.note(dykstra.converged));
    CHECK(crit.note(std::abs(dykstra.plan.total_mass() - problem.eta) <= 1e-8));
    for (int i = 0; i < problem.n(); ++i)
      CHECK(crit.note(dykstra.plan.row_marginal()[i] <= problem.p[i] + 1e-8));
    for (int j = 0; j < problem.m(); ++j)
      CHECK(crit.note(dykstra.plan.col_marginal()[j] <= problem.q[j] + 1e-8));

    const double tol = std::max(1e-2, 5.0 * 0.01 * problem.n() * problem.m());
    CHECK(crit.note(std::abs(dykstra.primal_value - lp_a.primal_value) <= tol));
  }
}

TEST_CASE("criterion 8: constant penalties reproduce classical partial transport") {
  Criterion crit("criterion 8: constant-lambda gopt equals the classical opt oracle");
  SplitMix64 rng(0xACC8);
  const double lambdas[] = {0.1, 1.0, 10.0};
  for (int t = 0; t < 50; ++t) {
    const double lambda = lambdas[t % 3];
    const int n = rng.uniform_int(2, 6), m = rng.uniform_int(2, 6);
    const CostMatrix cost =
        CostMatrix::from_matrix(gopt::testing::random_matrix(rng, n, m, 0.0, 10.0));
    const DiscreteMeasure p(gopt::testing::random_vector(rng, n, 0.1, 2.0));
    const DiscreteMeasure q(gopt::testing::random_vector(rng, m, 0.1, 2.0));

    // Exact solve of the ptv form via the augmented reduction.
    const GoptProblem ptv(cost, p, q, std::vector<double>(n, lambda),
                          std::vector<double>(m, lambda), PenaltyKind::PTV, PenaltyKind::PTV);
    const SolveReport lp = solve_gopt_lp(ptv);

    // Classical opt objective <c,g> + lambda(|p - g1| + |q - g2|) as a tv LP.
    const GoptProblem tv(cost, p, q, std::vector<double>(n, lambda),
                         std::vector<double>(m, lambda), PenaltyKind::TV, PenaltyKind::TV);
    const LpSolution oracle = simplex_solve(lp_from_gopt(tv));
    CHECK(crit.note(oracle.status == LpStatus::Optimal));
    CHECK(crit.note(std::abs(lp.primal_value - oracle.value) <= 1e-7));
  }
}

TEST_CASE("criterion 9: bregman projection unit laws") {
  Criterion crit("criterion 9: projection idempotence and kl-optimality");
  SplitMix64 rng(0xACC9);

  auto kl = [](const Matrix& a, const Matrix& b) {
    double value = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double x = a.data()[k], y = b.data()[k];
      value += (x > 0.0 ? x * std::log(x / y) : 0.0) - x + y;
    }
    return value;
  };

  for (int t = 0; t < 20; ++t) {
    const Matrix gamma = gopt::testing::random_matrix(rng, 3, 3, 0.05, 2.0);
    const std::vector<double> p = gopt::testing::random_vector(rng, 3, 0.3, 1.5);
    const std::vector<double> q = gopt::testing::random_vector(rng, 3, 0.3, 1.5);
    const double eta = rng.uniform(0.1, 1.5);

    const Matrix r1 = bregman_project_rows(gamma, p);
    const Matrix c1 = bregman_project_cols(gamma, q);
    const Matrix m1 = bregman_project_mass(gamma, eta);
    const Matrix r2 = bregman_project_rows(r1, p);
    const Matrix c2 = bregman_project_cols(c1, q);
    const Matrix m2 = bregman_project_mass(m1, eta);
    for (std::size_t k = 0; k < gamma.size(); ++k) {
      CHECK(crit.note(std::abs(r2.data()[k] - r1.data()[k]) <= 1e-10));
      CHECK(crit.note(std::abs(c2.data()[k] - c1.data()[k]) <= 1e-10));
      CHECK(crit.note(std::abs(m2.data()[k] - m1.data()[k]) <= 1e-10));
    }
  }

  // Monte Carlo optimality of the row projection.
  const Matrix gamma = gopt::testing::random_matrix(rng, 3, 3, 0.05, 2.0);
  const std::vector<double> p = gopt::testing::random_vector(rng, 3, 0.3, 1.5);
  const Matrix projected = bregman_project_rows(gamma, p);
  const double best = kl(projected, gamma);
  for (int t = 0; t < 100; ++t) {
    Matrix candidate = gopt::testing::random_matrix(rng, 3, 3, 0.01, 2.0);
    for (int i = 0; i < 3; ++i) {
      double row = 0.0;
      for (int j = 0; j < 3; ++j) row += candidate(i, j);
      const double scale = rng.uniform(0.05, 1.0) * p[i] / row;
      for (int j = 0; j < 3; ++j) candidate(i, j) *= scale;
    }
    CHECK(crit.note(kl(candidate, gamma) >= best - 1e-10));
  }
}

TEST_CASE("criterion 10: divergence algebra") {
  Criterion crit("criterion 10: conjugacy, ptv split and self-divergence laws");

  const EntropyKind kinds[] = {EntropyKind::KL,       EntropyKind::TV,
                               EntropyKind::PTV,      EntropyKind::Equality,
                               EntropyKind::Zero,     EntropyKind::Interval};

  auto domain_grid = [](EntropyKind kind) -> std::vector<double> {
    switch (kind) {
      case EntropyKind::KL: return {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
      case EntropyKind::TV: return {0.0, 0.25, 0.5, 1.0, 2.0, 7.5};
      case EntropyKind::PTV: return {0.0, 0.25, 0.5, 0.75, 1.0};
      case EntropyKind::Equality: return {1.0};
      case EntropyKind::Zero: return {-2.0, 0.0, 0.5, 3.0};
      case EntropyKind::Interval: return {0.0, 0.5, 1.0};
    }
    return {};
  };
  auto conjugate_grid = [](EntropyKind kind) -> std::vector<double> {
    switch (kind) {
      case EntropyKind::KL: return {-5.0, -1.0, 0.0, 0.5, 1.0, 2.0};
      case EntropyKind::TV: return {-4.0, -1.0, -0.5, 0.0, 0.5, 1.0};
      case EntropyKind::PTV: return {-4.0, -1.0, 0.0, 1.0, 6.0};
      case EntropyKind::Equality: return {-3.0, 0.0, 2.0};
      case EntropyKind::Zero: return {0.0};
      case EntropyKind::Interval: return {-2.0, 0.0, 1.5};
    }
    return {};
  };

  for (EntropyKind kind : kinds)
    for (double s : domain_grid(kind))
      for (double sp : conjugate_grid(kind))
        CHECK(crit.note(entropy_value(kind, s) + conjugate_value(kind, sp) - s * sp >= -1e-12));

  for (double s : {-0.5, 0.0, 0.25, 0.5, 1.0, 1.5, 4.0}) {
    const double lhs = entropy_value(EntropyKind::PTV, s);
    const double rhs =
        entropy_value(EntropyKind::TV, s) + entropy_value(EntropyKind::Interval, s);
    CHECK(crit.note(lhs == rhs || std::abs(lhs - rhs) <= 1e-12));
  }

  SplitMix64 rng(0xACC10);
  const std::vector<double> a = gopt::testing::random_vector(rng, 6, 0.1, 3.0);
  for (EntropyKind kind : {EntropyKind::KL, EntropyKind::TV, EntropyKind::PTV,
                           EntropyKind::Equality, EntropyKind::Interval})
    CHECK(crit.note(std::abs(f_divergence(kind, a, a)) <= 1e-12));
}
