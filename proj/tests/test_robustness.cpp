// Randomized robustness sweeps: degenerate exact instances against the
// oracle, and the scaling solver pushed well outside the comfortable
// parameter range.

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gopt/exact_lp.hpp"
#include "gopt/mopt.hpp"
#include "gopt/oracle.hpp"
#include "gopt/sinkhorn.hpp"
#include "test_support.hpp"

using namespace gopt;
using gopt::testing::SplitMix64;

TEST_CASE("exact solvers agree on degenerate instance mixes") {
  // Integer costs force pivot ties, zero lambdas force destruction, unit
  // masses force degenerate flows; none of it may break the identity.
  SplitMix64 rng(0xDE6E);
  for (int t = 0; t < 500; ++t) {
    const int n = rng.uniform_int(1, 7), m = rng.uniform_int(1, 7);
    const bool integer_costs = rng.uniform_int(0, 1) == 1;
    const bool unit_masses = rng.uniform_int(0, 3) == 0;
    const bool zero_lambda = rng.uniform_int(0, 3) == 0;
    Matrix cost(n, m);
    for (double& x : cost.data())
      x = integer_costs ? rng.uniform_int(0, 6) : rng.uniform(0.0, 10.0);
    std::vector<double> p(n), q(m), l1(n), l2(m);
    for (double& x : p) x = unit_masses ? 1.0 : rng.uniform(0.05, 3.0);
    for (double& x : q) x = unit_masses ? 1.0 : rng.uniform(0.05, 3.0);
    for (double& x : l1)
      x = zero_lambda ? 0.0 : (integer_costs ? rng.uniform_int(0, 4) : rng.uniform(0.0, 6.0));
    for (double& x : l2)
      x = zero_lambda ? 0.0 : (integer_costs ? rng.uniform_int(0, 4) : rng.uniform(0.0, 6.0));

    const GoptProblem problem(CostMatrix::from_matrix(std::move(cost)),
                              DiscreteMeasure(std::move(p)), DiscreteMeasure(std::move(q)),
                              std::move(l1), std::move(l2), PenaltyKind::PTV, PenaltyKind::PTV);
    const SolveReport lp = solve_gopt_lp(problem);
    const LpSolution oracle = simplex_solve(lp_from_gopt(problem));
    REQUIRE(oracle.status == LpStatus::Optimal);
    CHECK(std::abs(lp.primal_value - oracle.value) <= 1e-7);
    CHECK(check_support_pruning(problem, lp.plan, 1e-6));
  }
}

TEST_CASE("flat costs leave the transport value well defined") {
  SplitMix64 rng(0xDE6F);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(2, 6);
    const std::vector<double> mass(n, 1.0);
    const BalancedOtSolution s =
        solve_balanced_ot(BalancedOtProblem(Matrix(n, n, 1.0), mass, mass));
    CHECK(s.value == doctest::Approx(static_cast<double>(n)).epsilon(1e-9));
  }
}

TEST_CASE("mopt endpoints of the mass range") {
  SplitMix64 rng(0xDE70);
  for (int t = 0; t < 100; ++t) {
    const double fraction = rng.uniform_int(0, 10) / 10.0;  // includes 0 and 1
    const MoptProblem problem = gopt::testing::random_mopt(rng, 6, 8.0, fraction);
    const double alpha = rng.uniform(0.0, 3.0);
    const double beta = rng.uniform(0.1, 2.0);
    const SolveReport lp = solve_mopt_lp(problem, alpha, beta);
    const LpSolution oracle = simplex_solve(lp_from_mopt(problem));
    REQUIRE(oracle.status == LpStatus::Optimal);
    CHECK(std::abs(lp.primal_value - oracle.value) <= 1e-7);
    CHECK(std::abs(lp.plan.total_mass() - problem.eta) <= 1e-9);
  }
}

TEST_CASE("scaling solver stays finite in extreme regimes") {
  // Penalties up to 100, epsilon down to 1e-3, masses spanning six orders of
  // magnitude. Convergence is not guaranteed out here; finiteness and honest
  // reporting are.
  SplitMix64 rng(0xDE71);
  const double eps_grid[] = {1.0, 0.1, 0.01, 0.001};
  const PenaltyKind kinds[] = {PenaltyKind::TV, PenaltyKind::PTV};
  int converged = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = rng.uniform_int(1, 6), m = rng.uniform_int(1, 6);
    const double cost_hi = rng.uniform(0.5, 20.0);
    const double lambda_hi = rng.uniform(0.0, 100.0);
    const double mass_lo = rng.uniform(1e-3, 0.5);
    const double mass_hi = mass_lo + rng.uniform(0.1, 1000.0);
    Matrix cost(n, m);
    for (double& x : cost.data()) x = rng.uniform(0.0, cost_hi);
    std::vector<double> p(n), q(m), l1(n), l2(m);
    for (double& x : p) x = rng.uniform(mass_lo, mass_hi);
    for (double& x : q) x = rng.uniform(mass_lo, mass_hi);
    for (double& x : l1) x = rng.uniform(0.0, lambda_hi);
    for (double& x : l2) x = rng.uniform(0.0, lambda_hi);
    const PenaltyKind k1 = kinds[rng.uniform_int(0, 1)];
    const PenaltyKind k2 = kinds[rng.uniform_int(0, 1)];
    const GoptProblem problem(CostMatrix::from_matrix(std::move(cost)),
                              DiscreteMeasure(std::move(p)), DiscreteMeasure(std::move(q)),
                              std::move(l1), std::move(l2), k1, k2);
    EntropicConfig config;
    config.epsilon = eps_grid[rng.uniform_int(0, 3)];
    config.tol = 1e-10;
    config.max_iters = 30000;
    const SolveReport r = solve_egopt(problem, config);

    for (double x : r.potentials->phi) CHECK(std::isfinite(x));
    for (double x : r.potentials->psi) CHECK(std::isfinite(x));
    for (double x : r.plan.matrix().data()) {
      CHECK(x >= 0.0);
      CHECK(std::isfinite(x));
    }
    if (r.converged) {
      ++converged;
      CHECK(std::abs(*r.gap) <= 1e-4 * (1.0 + std::abs(r.primal_value)));
    }
  }
  // The budget is deliberately tight; most but not all instances make it.
  CHECK(converged >= 70);
}
