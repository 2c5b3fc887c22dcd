#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gopt/oracle.hpp"
#include "gopt/sinkhorn.hpp"
#include "test_support.hpp"

using namespace gopt;
using gopt::testing::SplitMix64;

TEST_CASE("simplex solves scalar bound") {
  // min x s.t. x >= 1, i.e. -x <= -1.
  DenseLp lp;
  lp.objective = {1.0};
  lp.ineq_lhs = Matrix::from_rows({{-1.0}});
  lp.ineq_rhs = {-1.0};
  const LpSolution s = simplex_solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.value == doctest::Approx(1.0));
}

TEST_CASE("simplex detects unbounded and infeasible problems") {
  DenseLp unbounded;
  unbounded.objective = {-1.0};
  CHECK(simplex_solve(unbounded).status == LpStatus::Unbounded);

  DenseLp infeasible;
  infeasible.objective = {1.0};
  infeasible.ineq_lhs = Matrix::from_rows({{1.0}});
  infeasible.ineq_rhs = {-1.0};
  CHECK(simplex_solve(infeasible).status == LpStatus::Infeasible);
}

TEST_CASE("balanced 2x2 transport") {
  const DenseLp lp = lp_from_balanced_ot(Matrix::from_rows({{0, 1}, {1, 0}}), {1, 1}, {1, 1});
  const LpSolution s = simplex_solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == doctest::Approx(0.0));
}

TEST_CASE("gopt lp formulations on 1x1 instances") {
  const CostMatrix c = CostMatrix::from_matrix(Matrix::from_rows({{3.0}}));
  const DiscreteMeasure unit({1.0});

  SUBCASE("ptv: destroying both masses beats transporting") {
    const GoptProblem problem(c, unit, unit, {1.0}, {1.0}, PenaltyKind::PTV, PenaltyKind::PTV);
    const LpSolution s = simplex_solve(lp_from_gopt(problem));
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("tv agrees when staying under the marginals is optimal") {
    const GoptProblem problem(c, unit, unit, {1.0}, {1.0}, PenaltyKind::TV, PenaltyKind::TV);
    const LpSolution s = simplex_solve(lp_from_gopt(problem));
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("source duplication instance has optimum 1 with plan [1,1]") {
  const GoptProblem problem(CostMatrix::from_matrix(Matrix::from_rows({{0.0, 1.0}})),
                            DiscreteMeasure({1.0}), DiscreteMeasure({1.0, 1.0}), {0.0},
                            {100.0, 100.0}, PenaltyKind::TV, PenaltyKind::TV);
  const LpSolution s = simplex_solve(lp_from_gopt(problem));
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s.x[1] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("mopt lp formulations") {
  SUBCASE("forced full transport") {
    const MoptProblem problem(CostMatrix::from_matrix(Matrix::from_rows({{1.0}})), {1.0}, {1.0},
                              1.0);
    CHECK(simplex_solve(lp_from_mopt(problem)).value == doctest::Approx(1.0));
  }
  SUBCASE("diagonal split has zero cost") {
    const MoptProblem problem(CostMatrix::from_matrix(Matrix::from_rows({{0.0, 4.0}, {4.0, 0.0}})),
                              {1.0, 1.0}, {1.0, 1.0}, 1.0);
    CHECK(simplex_solve(lp_from_mopt(problem)).value == doctest::Approx(0.0));
  }
  SUBCASE("eta zero gives the empty plan") {
    const MoptProblem problem(CostMatrix::from_matrix(Matrix::from_rows({{2.0}})), {1.0}, {1.0},
                              0.0);
    const LpSolution s = simplex_solve(lp_from_mopt(problem));
    CHECK(s.value == doctest::Approx(0.0));
    CHECK(s.x[0] == doctest::Approx(0.0));
  }
}

TEST_CASE("cross-solver identity against the augmented reduction") {
  SplitMix64 rng(41);
  for (int t = 0; t < 25; ++t) {
    const GoptProblem problem = gopt::testing::random_gopt(rng, {});
    const LpSolution oracle = simplex_solve(lp_from_gopt(problem));
    REQUIRE(oracle.status == LpStatus::Optimal);
    const SolveReport lp = solve_gopt_lp(problem);
    CHECK(std::abs(lp.primal_value - oracle.value) <= 1e-7);
  }
}

TEST_CASE("mopt identity against the augmented reduction") {
  SplitMix64 rng(42);
  for (int t = 0; t < 25; ++t) {
    const MoptProblem problem = gopt::testing::random_mopt(rng, 6, 10.0, 0.5);
    const LpSolution oracle = simplex_solve(lp_from_mopt(problem));
    REQUIRE(oracle.status == LpStatus::Optimal);
    const SolveReport lp = solve_mopt_lp(problem);
    CHECK(std::abs(lp.primal_value - oracle.value) <= 1e-7);
  }
}

TEST_CASE("entropic value never beats the exact optimum") {
  SplitMix64 rng(43);
  for (int t = 0; t < 5; ++t) {
    const GoptProblem problem =
        gopt::testing::random_gopt(rng, {.max_size = 4, .cost_hi = 5.0, .lambda_hi = 3.0});
    const LpSolution oracle = simplex_solve(lp_from_gopt(problem));
    REQUIRE(oracle.status == LpStatus::Optimal);
    for (double eps : {1.0, 0.1, 0.01}) {
      EntropicConfig config;
      config.epsilon = eps;
      config.tol = 1e-11;
      config.max_iters = 200000;
      const SolveReport run = solve_egopt(problem, config);
      const double slack = convergence_feasibility_slack(config, 2.0);
      const ObjectiveParts parts = gopt_primal_objective(problem, run.plan, slack);
      CHECK(parts.total >= oracle.value - 1e-7);
    }
  }
}
