#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradflow/markov_core.hpp"
#include "gradflow/zoo.hpp"

namespace gradflow {

using Json = nlohmann::ordered_json;

/// Chain file schema: {"states": [names...], "Q": [[...], ...], "labels": any}.
struct ChainFile {
  std::vector<std::string> states;
  Matrix rates;
  /// Free-form metadata; null when absent.
  Json labels;
};

/// Throws SchemaViolation on structural problems. The rate matrix is
/// returned raw; validate_generator is the caller's next step.
ChainFile parse_chain(const Json& doc);
ChainFile read_chain_file(const std::string& path);

Json chain_to_json(const ChainSpec& spec);
Json chain_to_json(const std::vector<std::string>& states, const Generator& q, const Json& labels);

/// Default state names s0, s1, ...
std::vector<std::string> default_state_names(Eigen::Index n);

/// 17 significant digits (printf "%.17g"); round-trips every double.
std::string format_number(double x);

/// Pretty JSON with 2-space indentation; floating-point numbers use
/// format_number and arrays of scalars stay on one line.
std::string dump_json(const Json& doc);

Json to_json(const RowVector& v);
Json to_json(const Matrix& m);

/// CSV with header t,s0,...,sd and 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace gradflow
