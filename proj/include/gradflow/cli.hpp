#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gradflow/chain_io.hpp"

namespace gradflow::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNotIrreducible = 3,
  kNotRepresentable = 4,
  kIntegrationFailure = 5,
};

/// Reads GRADFLOW_TOL; falls back to kResidualTolerance. Throws
/// InvalidParameter for a value that is not a positive number.
double residual_tolerance_from_env();

/// Report builders, shared by the commands and by tests that recompute them.
Json analyze_report(const ChainFile& chain, double tol);
Json construct_report(const ChainFile& chain, const std::string& functional, double tol);
Json check_functional_report(const ChainFile& chain, const Json& functional_spec, double tol);

struct SimulateOptions {
  std::vector<double> rho0;
  double t_end = 5.0;
  double dt = 1e-3;
  std::optional<std::pair<double, double>> perturb;  // (a, radius)
  std::optional<std::string> out;
};

Json simulate_report(const ChainFile& chain, const SimulateOptions& opts, double tol);

/// Companion path for the semigroup trajectory: x.csv -> x.semigroup.csv.
std::string semigroup_csv_path(const std::string& out);

/// Parses and runs one command line; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gradflow::cli
