#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "problem_file.hpp"
#include "runner.hpp"

namespace {

// Exit codes: 0 success, 1 usage/parse, 2 solver rejection, 3 non-convergence.
constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitRejected = 2;
constexpr int kExitNotConverged = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers for generalized optimal partial transport between discrete measures"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string solver_override;
  std::optional<double> epsilon_override, eta_override, tol_override;
  std::optional<int> max_iters_override;
  std::string output_path;

  CLI::App* solve = app.add_subcommand("solve", "Solve a problem file and print a report");
  solve->add_option("file", problem_path, "Problem file (JSON)")->required();
  solve->add_option("--solver", solver_override,
                    "Override the file's solver (sinkhorn, lp, mopt-lp, mopt-dykstra, sopt, oracle)");
  solve->add_option("--epsilon", epsilon_override, "Entropic regularization strength");
  solve->add_option("--eta", eta_override, "Transported mass for the mopt solvers");
  solve->add_option("--tol", tol_override, "Convergence tolerance");
  solve->add_option("--max-iters", max_iters_override, "Iteration cap");
  solve->add_option("--output", output_path, "Also write the report to this path");

  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the embedded cross-solver identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (selftest->parsed()) return gopt::cli::run_selftest(std::cout);

  try {
    gopt::cli::ProblemFile file = gopt::cli::parse_problem_file(problem_path);
    if (!solver_override.empty()) file.solver = solver_override;
    if (epsilon_override) file.epsilon = *epsilon_override;
    if (eta_override) file.eta = *eta_override;
    if (tol_override) file.tol = *tol_override;
    if (max_iters_override) file.max_iters = *max_iters_override;

    gopt::cli::RunOutcome outcome = gopt::cli::run_problem(file);
    const std::string text = outcome.report.dump(2) + "\n";
    std::cout << text;
    if (!output_path.empty()) {
      std::ofstream out(output_path);
      if (!out) {
        std::cerr << "error: cannot write " << output_path << "\n";
        return kExitParse;
      }
      out << text;
    }
    return outcome.converged ? kExitOk : kExitNotConverged;
  } catch (const gopt::cli::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const gopt::cli::SolverRejection& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRejected;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitRejected;
  }
}
