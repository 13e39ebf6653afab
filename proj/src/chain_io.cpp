#include "gradflow/chain_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "gradflow/errors.hpp"

namespace gradflow {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump_scalar(std::ostringstream& os, const Json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::isfinite(x)) {
      os << format_number(x);
    } else {
      os << "null";
    }
  } else {
    os << j.dump();
  }
}

void dump_value(std::ostringstream& os, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << pad << Json(it.key()).dump() << ": ";
      dump_value(os, it.value(), depth + 1);
    }
    os << "\n" << close_pad << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
    if (flat) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ", ";
        dump_scalar(os, j[i]);
      }
      os << "]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i > 0) os << ",\n";
      os << pad;
      dump_value(os, j[i], depth + 1);
    }
    os << "\n" << close_pad << "]";
  } else {
    dump_scalar(os, j);
  }
}

}  // namespace

ChainFile parse_chain(const Json& doc) {
  if (!doc.is_object()) schema_error("chain document must be a JSON object");
  if (!doc.contains("states") || !doc["states"].is_array()) schema_error("missing array \"states\"");
  if (!doc.contains("Q") || !doc["Q"].is_array()) schema_error("missing array \"Q\"");

  ChainFile out;
  std::set<std::string> seen;
  for (const auto& s : doc["states"]) {
    if (!s.is_string()) schema_error("state names must be strings");
    if (!seen.insert(s.get<std::string>()).second) schema_error("duplicate state name " + s.dump());
    out.states.push_back(s.get<std::string>());
  }
  const auto n = static_cast<Eigen::Index>(out.states.size());
  if (n < 2) schema_error("a chain needs at least 2 states");

  const Json& rows = doc["Q"];
  if (static_cast<Eigen::Index>(rows.size()) != n) schema_error("\"Q\" must have one row per state");
  out.rates.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      schema_error("row " + std::to_string(i) + " of \"Q\" must have " + std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const Json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) schema_error("\"Q\" entries must be numbers");
      out.rates(i, j) = x.get<double>();
    }
  }
  if (doc.contains("labels")) out.labels = doc["labels"];
  return out;
}

ChainFile read_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_chain(doc);
}

std::vector<std::string> default_state_names(Eigen::Index n) {
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return names;
}

Json chain_to_json(const std::vector<std::string>& states, const Generator& q, const Json& labels) {
  Json doc;
  doc["states"] = states;
  doc["Q"] = to_json(q.rates());
  if (!labels.is_null()) doc["labels"] = labels;
  return doc;
}

Json chain_to_json(const ChainSpec& spec) {
  Json labels;
  labels["family"] = spec.name;
  labels["tags"] = spec.tags;
  labels["pi"] = to_json(spec.pi.mass());
  return chain_to_json(default_state_names(spec.generator.n_states()), spec.generator, labels);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& doc) {
  std::ostringstream os;
  dump_value(os, doc, 0);
  os << "\n";
  return os.str();
}

Json to_json(const RowVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(RowVector(m.row(i))));
  return rows;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",s" << i;
  os << "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_number(traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) os << "," << format_number(traj.states[k][i]);
    os << "\n";
  }
}

}  // namespace gradflow
