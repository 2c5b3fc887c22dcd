#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "problem_file.hpp"

namespace gopt::cli {

/// Solver rejected the instance (wrong penalty kind, mass precondition, ...);
/// maps to exit code 2.
struct SolverRejection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOutcome {
  nlohmann::ordered_json report;
  bool converged = true;
};

/// Dispatches the problem to the selected solver and builds the report
/// object. Throws ParseError for schema-level problems and SolverRejection
/// for solver incompatibilities.
RunOutcome run_problem(const ProblemFile& file);

/// Cross-solver identity suite on a fixed seeded instance list (oracle vs
/// augmented LP vs sinkhorn at epsilon = 0.01). Prints one line per instance
/// and returns 0 iff everything agrees within tolerance.
int run_selftest(std::ostream& os);

}  // namespace gopt::cli
