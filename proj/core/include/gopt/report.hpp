#pragma once

#include <optional>
#include <vector>

#include "gopt/measures.hpp"

namespace gopt {

/// Entropic dual potentials (phi, psi) for a regularization strength epsilon.
/// The scaling vectors are u = exp(phi/epsilon), v = exp(psi/epsilon).
struct DualPotentials {
  std::vector<double> phi;
  std::vector<double> psi;
  double epsilon = 0.0;
};

/// Common result type for every solver in the library. Entropic solvers fill
/// in potentials, a dual value and the duality gap; the exact LP solvers
/// report a gap of zero by construction; Dykstra reports primal-only.
struct SolveReport {
  explicit SolveReport(TransportPlan plan_) : plan(std::move(plan_)) {}

  TransportPlan plan;
  std::optional<DualPotentials> potentials;
  double primal_value = 0.0;
  std::optional<double> dual_value;
  std::optional<double> gap;
  int iterations = 0;
  bool converged = false;
};

}  // namespace gopt
