#include "gradflow/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gradflow/entropy.hpp"
#include "gradflow/errors.hpp"
#include "gradflow/flowsim.hpp"
#include "gradflow/spectral.hpp"
#include "gradflow/structure.hpp"
#include "gradflow/zoo.hpp"

namespace gradflow::cli {

namespace {

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); }

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      bad_input(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (values.empty()) bad_input(flag + ": empty list");
  return values;
}

RowVector to_row(const std::vector<double>& v) {
  return Eigen::Map<const RowVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Generator irreducible_generator(const ChainFile& chain) {
  Generator q = validate_generator(chain.rates);
  if (!is_irreducible(q)) throw Error(ErrorCode::NotIrreducible, "the chain is not irreducible");
  return q;
}

Json structure_to_json(const GradientStructure& gs) {
  Json j;
  j["eigenvalues"] = gs.eigenvalues();
  Json basis = Json::array();
  for (const auto& f : gs.eigenbasis()) basis.push_back(to_json(f.delta()));
  j["eigenbasis"] = basis;
  j["metric"] = to_json(gs.metric().matrix());
  return j;
}

Json functional_from_spec(const Json& spec, const Distribution& pi, Functional& out) {
  if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string()) {
    bad_input("functional spec needs a string \"family\"");
  }
  const auto family = spec["family"].get<std::string>();
  const Eigen::Index n = pi.size();
  try {
    if (family == "entropy-scaled") {
      const double c = spec.value("c", 1.0);
      out = relative_entropy_functional(pi, c);
    } else if (family == "quadratic") {
      if (!spec.contains("matrix")) bad_input("quadratic functional needs \"matrix\"");
      const auto rows = spec["matrix"].get<std::vector<std::vector<double>>>();
      if (static_cast<Eigen::Index>(rows.size()) != n) bad_input("quadratic matrix must be n x n");
      Matrix a(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
          bad_input("quadratic matrix must be n x n");
        }
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      RowVector center = pi.mass();
      if (spec.contains("center")) center = to_row(spec["center"].get<std::vector<double>>());
      out = ambient_quadratic(a, center);
    } else if (family == "custom-polynomial") {
      if (!spec.contains("terms") || !spec["terms"].is_array()) bad_input("polynomial needs \"terms\"");
      std::vector<Monomial> terms;
      for (const auto& t : spec["terms"]) {
        terms.push_back(Monomial{t.at("coef").get<double>(), t.at("powers").get<std::vector<int>>()});
      }
      out = polynomial_functional(std::move(terms), n);
    } else {
      bad_input("unknown functional family '" + family + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    bad_input(std::string("malformed functional spec: ") + e.what());
  }
  return Json(family);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotIrreducible: return kNotIrreducible;
    case ErrorCode::NotRepresentable: return kNotRepresentable;
    case ErrorCode::LeftSimplex:
    case ErrorCode::SingularMetric: return kIntegrationFailure;
    default: return kInputError;
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) bad_input("cannot write " + path);
  os << text;
}

}  // namespace

double residual_tolerance_from_env() {
  const char* raw = std::getenv("GRADFLOW_TOL");
  if (raw == nullptr || *raw == '\0') return kResidualTolerance;
  char* end = nullptr;
  const double tol = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(tol > 0.0)) bad_input(std::string("GRADFLOW_TOL is not a positive number: ") + raw);
  return tol;
}

Json analyze_report(const ChainFile& chain, double tol) {
  const Generator q = irreducible_generator(chain);
  const Distribution pi = stationary_distribution(q, tol);
  const SpectralDecomposition spec = left_eigen(q);
  const Verdict verdict = is_gradient_flow_representable(spec);
  const DetailedBalance balance = check_detailed_balance(q, tol);

  Json r;
  r["states"] = chain.states;
  r["irreducible"] = true;
  r["stationary"] = to_json(pi.mass());
  Json values = Json::array();
  for (const auto& z : spec.eigenvalues) values.push_back(Json::array({z.real(), z.imag()}));
  r["eigenvalues"] = values;
  r["real_spectrum"] = spec.real;
  r["diagonalisable"] = spec.diagonalisable;
  r["eigenvector_condition"] = spec.eigenvector_condition;
  r["representable"] = std::string(to_string(verdict));
  r["reversible"] = balance.reversible;
  r["detailed_balance_asymmetry"] = balance.asymmetry;
  r["verdicts"] = Json{{"entropy_gradient_flow", balance.reversible},
                       {"some_gradient_flow", verdict == Verdict::Yes}};
  r["canonical_structure"] = verdict == Verdict::Yes ? structure_to_json(canonical_structure(q)) : Json();
  return r;
}

Json construct_report(const ChainFile& chain, const std::string& functional, double tol) {
  const Generator q = irreducible_generator(chain);
  const Distribution pi = stationary_distribution(q, tol);
  Json r;
  r["mode"] = functional;
  r["states"] = chain.states;
  r["pi"] = to_json(pi.mass());
  r["tangent_basis"] = to_json(tangent_basis_matrix(q.dim()));
  if (functional == "entropy") {
    const MetricAtPi g = metric_at_pi(q, entropy_hessian_at_pi(pi));
    r["status"] = std::string(to_string(g.status));
    r["metric"] = to_json(g.g);
    r["asymmetry"] = g.asymmetry;
    r["min_eigenvalue"] = g.min_eigenvalue;
  } else if (functional == "canonical") {
    const Json structure = structure_to_json(canonical_structure(q));
    for (const auto& [key, value] : structure.items()) r[key] = value;
  } else {
    bad_input("--functional must be entropy or canonical");
  }
  return r;
}

Json check_functional_report(const ChainFile& chain, const Json& functional_spec, double tol) {
  const Generator q = irreducible_generator(chain);
  const Distribution pi = stationary_distribution(q, tol);
  Functional f;
  const Json family = functional_from_spec(functional_spec, pi, f);
  const CompatibilityResult res = entropy_compatibility_check(f, pi);
  Json r;
  r["functional"] = family;
  r["pi"] = to_json(pi.mass());
  r["compatible"] = res.compatible;
  r["alpha"] = res.alpha;
  r["reason"] = std::string(to_string(res.reason));
  r["gradient_sup"] = res.gradient_sup;
  r["hessian_residual"] = res.hessian_residual;
  return r;
}

std::string semigroup_csv_path(const std::string& out) {
  const std::string ext = ".csv";
  if (out.size() >= ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + ".semigroup.csv";
  }
  return out + ".semigroup.csv";
}

Json simulate_report(const ChainFile& chain, const SimulateOptions& opts, double tol) {
  const Generator q = irreducible_generator(chain);
  stationary_distribution(q, tol);
  const GradientStructure gs = canonical_structure(q);
  const Distribution rho0 = Distribution::from(to_row(opts.rho0));
  if (rho0.size() != q.n_states()) bad_input("--rho0 must have one entry per state");

  const MetricField g = MetricField::constant(gs.metric());
  const Functional f = gs.functional();

  const Trajectory semigroup = semigroup_trajectory(q, rho0, opts.t_end, opts.dt);
  const auto deviation = [&](const Trajectory& flow) {
    double worst = 0.0;
    for (std::size_t k = 0; k < flow.size(); ++k) {
      worst = std::max(worst, (flow.states[k].mass() - semigroup.states[k].mass()).cwiseAbs().maxCoeff());
    }
    return worst;
  };

  Trajectory flow = gradient_flow_integrate(g, f, rho0, opts.t_end, opts.dt);
  Json r;
  r["t_end"] = opts.t_end;
  r["dt"] = opts.dt;
  r["samples"] = flow.size();
  r["max_deviation"] = deviation(flow);

  if (opts.perturb) {
    const auto [a, radius] = *opts.perturb;
    const MetricField perturbed = perturbed_metric(g, q, rho0, a, radius);
    const Matrix gap = perturbed.at(rho0).matrix() - g.at(rho0).matrix();
    flow = gradient_flow_integrate(perturbed, f, rho0, opts.t_end, opts.dt);
    r["perturbation"] = Json{{"a", a},
                             {"radius", radius},
                             {"budget", perturbation_budget(g, q, rho0)},
                             {"metric_gap", gap.cwiseAbs().maxCoeff()},
                             {"max_deviation", deviation(flow)}};
  }

  if (opts.out) {
    std::ostringstream flow_csv;
    std::ostringstream semi_csv;
    write_trajectory_csv(flow_csv, flow);
    write_trajectory_csv(semi_csv, semigroup);
    write_text(*opts.out, flow_csv.str());
    write_text(semigroup_csv_path(*opts.out), semi_csv.str());
    r["trajectory_csv"] = *opts.out;
    r["semigroup_csv"] = semigroup_csv_path(*opts.out);
  }
  return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient-flow structure of finite continuous-time Markov chains", "gradflow"};
  app.require_subcommand(1);

  std::string input;
  std::string functional = "canonical";
  std::string functional_spec;
  std::string rho0;
  std::string perturb;
  std::string out_path;
  SimulateOptions sim;

  auto* analyze = app.add_subcommand("analyze", "Stationary law, spectrum and gradient-flow verdicts");
  analyze->add_option("chain", input, "Chain JSON file")->required();

  auto* construct = app.add_subcommand("construct", "Emit g|pi for the entropy or the canonical structure");
  construct->add_option("chain", input, "Chain JSON file")->required();
  construct->add_option("--functional", functional, "entropy | canonical")
      ->check(CLI::IsMember({"entropy", "canonical"}));

  auto* simulate = app.add_subcommand("simulate", "Integrate the canonical gradient flow against exp(tQ)");
  simulate->add_option("chain", input, "Chain JSON file")->required();
  simulate->add_option("--rho0", rho0, "Initial distribution, comma separated")->required();
  simulate->add_option("--t-end", sim.t_end, "Final time")->check(CLI::PositiveNumber);
  simulate->add_option("--dt", sim.dt, "RK4 step")->check(CLI::PositiveNumber);
  simulate->add_option("--perturb", perturb, "Metric perturbation 'a,radius' centred at rho0");
  simulate->add_option("--out", out_path, "Trajectory CSV (semigroup written alongside)");

  auto* check = app.add_subcommand("check-functional", "Test a functional's 2-jet against the entropy");
  check->add_option("chain", input, "Chain JSON file")->required();
  check->add_option("--functional-spec", functional_spec, "Functional spec: JSON file or inline JSON")
      ->required();

  std::string family;
  std::string pi_text;
  std::string v_text;
  double lambda = 1.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  Eigen::Index n_states = 3;
  double rate = 1.0;
  int max_tries = 10000;
  auto* zoo = app.add_subcommand("zoo", "Write a chain from one of the built-in families");
  zoo->add_option("family", family, "star | coupled-pair | random-reversible | random-nonrev-diag | cyclic")
      ->required()
      ->check(CLI::IsMember({"star", "coupled-pair", "random-reversible", "random-nonrev-diag", "cyclic"}));
  auto* pi_opt = zoo->add_option("--pi", pi_text, "Stationary distribution, comma separated");
  zoo->add_option("--lambda", lambda, "Eigenvalue magnitude for star/coupled-pair");
  auto* mu_opt = zoo->add_option("--mu", mu, "Coupling rate for coupled-pair");
  auto* v_opt = zoo->add_option("--v", v_text, "Eigenvector for coupled-pair, comma separated");
  zoo->add_option("--seed", seed, "Random seed");
  zoo->add_option("--n", n_states, "Number of states");
  zoo->add_option("--rate", rate, "Rate for cyclic");
  zoo->add_option("--max-tries", max_tries, "Rejection-sampling budget");
  zoo->add_option("--out", out_path, "Output path (stdout when absent)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    const double tol = residual_tolerance_from_env();
    Json report;
    if (analyze->parsed()) {
      report = analyze_report(read_chain_file(input), tol);
    } else if (construct->parsed()) {
      report = construct_report(read_chain_file(input), functional, tol);
    } else if (simulate->parsed()) {
      sim.rho0 = parse_list(rho0, "--rho0");
      if (!perturb.empty()) {
        const auto p = parse_list(perturb, "--perturb");
        if (p.size() != 2) bad_input("--perturb expects 'a,radius'");
        sim.perturb = std::make_pair(p[0], p[1]);
      }
      if (!out_path.empty()) sim.out = out_path;
      report = simulate_report(read_chain_file(input), sim, tol);
    } else if (check->parsed()) {
      Json spec;
      try {
        if (!functional_spec.empty() && functional_spec.front() == '{') {
          spec = Json::parse(functional_spec);
        } else {
          std::ifstream in(functional_spec);
          if (!in) bad_input("cannot open " + functional_spec);
          spec = Json::parse(in);
        }
      } catch (const nlohmann::json::parse_error& e) {
        bad_input(std::string("invalid functional spec JSON: ") + e.what());
      }
      report = check_functional_report(read_chain_file(input), spec, tol);
    } else if (zoo->parsed()) {
      const auto need = [](CLI::Option* opt, const char* name) {
        if (opt->count() == 0) bad_input(std::string("zoo family needs ") + name);
      };
      ChainSpec chain = [&]() {
        if (family == "star") {
          need(pi_opt, "--pi");
          return star_chain(Distribution::from(to_row(parse_list(pi_text, "--pi"))), lambda);
        }
        if (family == "coupled-pair") {
          need(pi_opt, "--pi");
          need(mu_opt, "--mu");
          need(v_opt, "--v");
          return coupled_pair_chain(Distribution::from(to_row(parse_list(pi_text, "--pi"))), lambda, mu,
                                    TangentVector::from(to_row(parse_list(v_text, "--v"))));
        }
        if (family == "random-reversible") {
          need(pi_opt, "--pi");
          return random_reversible(Distribution::from(to_row(parse_list(pi_text, "--pi"))), seed);
        }
        if (family == "random-nonrev-diag") return random_nonreversible_diagonalisable(n_states, seed, max_tries);
        return cyclic_chain(n_states, rate);
      }();
      const std::string text = dump_json(chain_to_json(chain));
      if (out_path.empty()) {
        out << text;
      } else {
        write_text(out_path, text);
      }
      return kOk;
    }
    out << dump_json(report);
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace gradflow::cli
