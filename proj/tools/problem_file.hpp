#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gopt/measures.hpp"

namespace gopt::cli {

/// Problem-file or usage error; maps to exit code 1.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// In-memory form of a problem file. Scalar lambda fields are broadcast to
/// vectors at parse time so the core never sees scalars.
struct ProblemFile {
  int version = 1;
  std::vector<double> p_weights;
  std::vector<double> q_weights;
  std::optional<std::vector<Point>> p_points;
  std::optional<std::vector<Point>> q_points;

  std::optional<Matrix> cost_matrix;
  std::optional<std::string> cost_rule;  // "sq_euclidean"

  std::optional<std::vector<double>> lambda1;
  std::optional<std::vector<double>> lambda2;
  PenaltyKind penalty1 = PenaltyKind::TV;
  PenaltyKind penalty2 = PenaltyKind::TV;

  std::string solver;  // sinkhorn | lp | mopt-lp | mopt-dykstra | sopt | oracle

  double epsilon = 0.1;
  std::optional<double> eta;
  double alpha = 0.0;
  double beta = 1.0;
  double tol = 1e-9;
  int max_iters = 10000;
};

ProblemFile parse_problem_file(const std::string& path);
ProblemFile parse_problem_text(const std::string& text, const std::string& origin);

/// Resolves the cost matrix from the explicit entries or the cost rule.
CostMatrix build_cost(const ProblemFile& file);

}  // namespace gopt::cli
