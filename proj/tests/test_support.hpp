#pragma once

#include <cstdint>
#include <vector>

#include "gopt/exact_lp.hpp"
#include "gopt/matrix.hpp"
#include "gopt/measures.hpp"
#include "gopt/mopt.hpp"

namespace gopt::testing {

// Deterministic generator; identical streams on every platform.
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

inline Matrix random_matrix(SplitMix64& rng, int n, int m, double lo, double hi) {
  Matrix out(n, m);
  for (double& x : out.data()) x = rng.uniform(lo, hi);
  return out;
}

inline std::vector<double> random_vector(SplitMix64& rng, int n, double lo, double hi) {
  std::vector<double> out(n);
  for (double& x : out) x = rng.uniform(lo, hi);
  return out;
}

struct GoptFamilyParams {
  int max_size = 6;
  double cost_lo = 0.0, cost_hi = 10.0;
  double mass_lo = 0.1, mass_hi = 2.0;
  double lambda_lo = 0.0, lambda_hi = 5.0;
  PenaltyKind penalty1 = PenaltyKind::PTV;
  PenaltyKind penalty2 = PenaltyKind::PTV;
};

inline GoptProblem random_gopt(SplitMix64& rng, const GoptFamilyParams& params) {
  // Draws are sequenced as separate statements so the instance stream does
  // not depend on the compiler's argument evaluation order.
  const int n = rng.uniform_int(2, params.max_size);
  const int m = rng.uniform_int(2, params.max_size);
  Matrix cost = random_matrix(rng, n, m, params.cost_lo, params.cost_hi);
  std::vector<double> p = random_vector(rng, n, params.mass_lo, params.mass_hi);
  std::vector<double> q = random_vector(rng, m, params.mass_lo, params.mass_hi);
  std::vector<double> l1 = random_vector(rng, n, params.lambda_lo, params.lambda_hi);
  std::vector<double> l2 = random_vector(rng, m, params.lambda_lo, params.lambda_hi);
  return GoptProblem(CostMatrix::from_matrix(std::move(cost)), DiscreteMeasure(std::move(p)),
                     DiscreteMeasure(std::move(q)), std::move(l1), std::move(l2), params.penalty1,
                     params.penalty2);
}

inline MoptProblem random_mopt(SplitMix64& rng, int max_size, double cost_hi,
                               double eta_fraction) {
  const int n = rng.uniform_int(2, max_size);
  const int m = rng.uniform_int(2, max_size);
  const std::vector<double> p = random_vector(rng, n, 0.1, 2.0);
  const std::vector<double> q = random_vector(rng, m, 0.1, 2.0);
  double sp = 0.0, sq = 0.0;
  for (double x : p) sp += x;
  for (double x : q) sq += x;
  return MoptProblem(CostMatrix::from_matrix(random_matrix(rng, n, m, 0.0, cost_hi)), p, q,
                     eta_fraction * std::min(sp, sq));
}

inline double transport_cost(const Matrix& cost, const Matrix& plan) {
  double value = 0.0;
  for (int i = 0; i < cost.rows(); ++i)
    for (int j = 0; j < cost.cols(); ++j) value += cost(i, j) * plan(i, j);
  return value;
}

// Random plan in the partial polytope {row <= p, col <= q}: a positive matrix
// scaled down row-wise then column-wise (both projections only shrink).
inline Matrix random_partial_plan(SplitMix64& rng, const std::vector<double>& p,
                                  const std::vector<double>& q) {
  const int n = static_cast<int>(p.size());
  const int m = static_cast<int>(q.size());
  Matrix plan = random_matrix(rng, n, m, 0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) row += plan(i, j);
    if (row > p[i])
      for (int j = 0; j < m; ++j) plan(i, j) *= p[i] / row;
  }
  for (int j = 0; j < m; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) col += plan(i, j);
    if (col > q[j])
      for (int i = 0; i < n; ++i) plan(i, j) *= q[j] / col;
  }
  return plan;
}

}  // namespace gopt::testing
