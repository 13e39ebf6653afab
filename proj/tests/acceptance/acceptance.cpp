// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradflow/chain_io.hpp"
#include "gradflow/cli.hpp"
#include "gradflow/entropy.hpp"
#include "gradflow/errors.hpp"
#include "gradflow/flowsim.hpp"
#include "gradflow/markov_core.hpp"
#include "gradflow/spectral.hpp"
#include "gradflow/structure.hpp"
#include "gradflow/zoo.hpp"

namespace {

using namespace gradflow;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double inf_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

constexpr double kTEnd = 5.0;
constexpr double kDt = 1e-3;

// The 50-chain corpus shared by the flow-equivalence and RK4-order criteria.
std::vector<ChainSpec> flow_corpus() {
  std::vector<ChainSpec> chains;
  for (int k = 0; k < 30; ++k) {
    const Eigen::Index n = 3 + k % 6;
    chains.push_back(random_reversible(random_distribution(n, 1000 + k, 1.0), 2000 + k));
  }
  for (int k = 0; k < 10; ++k) {
    chains.push_back(random_nonreversible_diagonalisable(3 + k % 2, 3000 + k));
  }
  for (int k = 0; k < 5; ++k) {
    const Eigen::Index n = 3 + k % 3;
    chains.push_back(star_chain(random_distribution(n, 4100 + k, 1.0), 0.5 + 0.5 * k));
  }
  for (int k = 0; k < 5; ++k) {
    const Eigen::Index n = 3 + k % 3;
    const Distribution pi = random_distribution(n, 4200 + k, 1.0);
    RowVector v = RowVector::Zero(n);
    v(0) = 1.0;
    v(1) = n == 3 ? -1.0 : -0.5 - 0.1 * k;
    v(2) -= v.sum();
    chains.push_back(coupled_pair_chain(pi, 1.0 + 0.25 * k, 0.02, TangentVector::from(v)));
  }
  return chains;
}

std::vector<Distribution> starts_for(const ChainSpec& c, int index) {
  std::vector<Distribution> out;
  for (int s = 0; s < 3; ++s) {
    out.push_back(random_distribution(c.generator.n_states(), 5000 + 10 * static_cast<std::uint64_t>(index) + s, 0.2));
  }
  return out;
}

Outcome criterion_converse_equivalence(const std::vector<ChainSpec>& corpus) {
  double worst = 0.0;
  int runs = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const GradientStructure gs = canonical_structure(corpus[i].generator);
    const MetricField g = MetricField::constant(gs.metric());
    for (const Distribution& rho0 : starts_for(corpus[i], static_cast<int>(i))) {
      worst = std::max(worst, compare_flows(corpus[i].generator, g, gs.functional(), rho0, kTEnd, kDt));
      ++runs;
    }
  }
  return {worst <= 1e-6, std::to_string(runs) + " flows, max deviation " + sci(worst) + " (limit 1e-6)"};
}

std::vector<ChainSpec> reversible_corpus() {
  std::vector<ChainSpec> chains;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 3 + k % 8;
    chains.push_back(random_reversible(random_distribution(n, 6000 + k, 0.2), 7000 + k));
  }
  return chains;
}

Outcome criterion_roundtrip(const std::vector<ChainSpec>& corpus) {
  double worst = 0.0;
  for (const ChainSpec& c : corpus) {
    const BilinearFormOnT m = entropy_hessian_at_pi(c.pi);
    const RecoveredGenerator r = recover_generator(metric_at_pi(c.generator, m).form(), m, c.pi);
    worst = std::max(worst, max_abs(r.ambient - c.generator.rates()) / c.generator.max_abs());
  }
  return {worst <= 1e-9, "100 chains, max |Q' - Q| / max|Q| = " + sci(worst) + " (limit 1e-9)"};
}

Outcome criterion_orthonormal_symmetry(const std::vector<ChainSpec>& corpus) {
  double worst_sum = 0.0;
  double worst_sym = 0.0;
  for (const ChainSpec& c : corpus) {
    const BilinearFormOnT m = entropy_hessian_at_pi(c.pi);
    const OrthonormalRepresentation o = orthonormal_representation(c.generator, metric_at_pi(c.generator, m).form(), m);
    worst_sum = std::max(worst_sum, inf_norm(o.q_bar + o.m_bar) / max_abs(o.q_bar));
    worst_sym = std::max(worst_sym, max_abs(o.q_bar - o.q_bar.transpose()));
  }
  return {worst_sum <= 1e-9 && worst_sym <= 1e-9, "max ||Qbar + Mbar||_inf / max|Qbar| = " + sci(worst_sum) +
                                                      ", max asymmetry " + sci(worst_sym) + " (limits 1e-9)"};
}

Outcome criterion_dichotomy(const std::vector<ChainSpec>& corpus) {
  int metric = 0;
  for (const ChainSpec& c : corpus) {
    const MetricAtPi r = metric_at_pi(c.generator, entropy_hessian_at_pi(c.pi));
    const double sym = max_abs(r.g - r.g.transpose());
    const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (r.g + r.g.transpose())).eigenvalues().minCoeff();
    if (r.is_metric() && sym <= 1e-8 * max_abs(r.g) && min_eig > 0.0) ++metric;
  }
  int rejected = 0;
  for (int k = 0; k < 20; ++k) {
    const ChainSpec c = random_nonreversible_diagonalisable(3 + k % 4, 8000 + k);
    if (!metric_at_pi(c.generator, entropy_hessian_at_pi(c.pi)).is_metric()) ++rejected;
  }
  return {metric == 100 && rejected == 20, "symmetric PD on " + std::to_string(metric) +
                                               "/100 reversible, not a metric on " + std::to_string(rejected) +
                                               "/20 non-reversible"};
}

Outcome criterion_non_uniqueness() {
  double min_gap = std::numeric_limits<double>::infinity();
  double worst_base = 0.0;
  double worst_pert = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ChainSpec c = random_reversible(random_distribution(3, 9000 + k, 1.0), 9100 + k);
    const GradientStructure gs = canonical_structure(c.generator);
    const MetricField g = MetricField::constant(gs.metric());

    // Centre well away from pi and from the boundary.
    std::uint64_t seed = 9200 + 100 * static_cast<std::uint64_t>(k);
    Distribution rho = random_distribution(3, seed, 0.3);
    while ((rho.mass() - c.pi.mass()).norm() < 0.1) rho = random_distribution(3, ++seed, 0.3);
    const double to_boundary = rho.mass().minCoeff() / std::sqrt(1.0 - 1.0 / 3.0);
    const double radius = 0.5 * std::min((rho.mass() - c.pi.mass()).norm(), to_boundary);

    const double a = 0.1 * perturbation_budget(g, c.generator, rho);
    const MetricField gt = perturbed_metric(g, c.generator, rho, a, radius);
    min_gap = std::min(min_gap, max_abs(gt.at(rho).matrix() - g.at(rho).matrix()));
    worst_base = std::max(worst_base, compare_flows(c.generator, g, gs.functional(), rho, kTEnd, kDt));
    worst_pert = std::max(worst_pert, compare_flows(c.generator, gt, gs.functional(), rho, kTEnd, kDt));
  }
  return {min_gap >= 1e-3 && worst_base <= 1e-6 && worst_pert <= 1e-6,
          "min metric gap " + sci(min_gap) + " (need >= 1e-3), deviation g " + sci(worst_base) + ", perturbed " +
              sci(worst_pert) + " (limit 1e-6)"};
}

Outcome criterion_cyclic() {
  double worst = 0.0;
  bool all_no = true;
  for (Eigen::Index n : {3, 4, 5}) {
    const double rate = 1.0;
    const ChainSpec c = cyclic_chain(n, rate);
    const SpectralDecomposition s = left_eigen(c.generator);
    all_no = all_no && is_gradient_flow_representable(s) == Verdict::No;
    // Greedy matching of each formula value to the closest unused eigenvalue.
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::complex<double> expect =
          rate * (std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)) - 1.0);
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_j = 0;
      for (std::size_t j = 0; j < used.size(); ++j) {
        if (!used[j] && std::abs(s.eigenvalues[j] - expect) < best) {
          best = std::abs(s.eigenvalues[j] - expect);
          best_j = j;
        }
      }
      used[best_j] = true;
      worst = std::max(worst, best);
    }
  }
  return {all_no && worst <= 1e-10,
          std::string("representable=") + (all_no ? "no" : "NOT no") + " for n=3,4,5; eigenvalue error " + sci(worst) +
              " (limit 1e-10)"};
}

Outcome criterion_compatibility_checker() {
  const Distribution pi = random_distribution(4, 9500, 0.2);
  double worst = 0.0;
  bool all_compatible = true;
  for (double c : {0.5, 1.0, 3.0}) {
    const CompatibilityResult r = entropy_compatibility_check(relative_entropy_functional(pi, c), pi);
    all_compatible = all_compatible && r.compatible;
    worst = std::max(worst, std::abs(r.alpha - c) / c);
  }
  const CompatibilityResult euclid =
      entropy_compatibility_check(ambient_quadratic(Matrix::Identity(4, 4), pi.mass()), pi);
  const Functional first{[](const Distribution& m) { return m[0]; }, {}};
  const CompatibilityResult linear = entropy_compatibility_check(first, pi);
  const bool ok = all_compatible && worst <= 1e-4 && euclid.reason == Incompatibility::HessianNotProportional &&
                  linear.reason == Incompatibility::NonzeroGradient;
  return {ok, "alpha relative error " + sci(worst) + " (limit 1e-4); euclidean: " +
                  std::string(to_string(euclid.reason)) + "; rho_0: " + std::string(to_string(linear.reason))};
}

Outcome criterion_chain_families() {
  std::mt19937_64 rng(9600);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double star_worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index n = 3 + k % 5;
    const double lambda = 0.5 + 0.3 * k;
    const ChainSpec c = star_chain(random_distribution(n, 9700 + k, 0.2), lambda);
    RowVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
    v(n - 1) = 0.0;
    v(0) -= v.sum();
    v /= v.cwiseAbs().maxCoeff();
    star_worst = std::max(star_worst, (v * c.generator.rates() + lambda * v).cwiseAbs().maxCoeff() / lambda);
  }

  double pair_eig = 0.0;
  double pair_db = 0.0;
  int built = 0;
  for (int k = 0; built < 20 && k < 200; ++k) {
    const Eigen::Index n = 3 + k % 4;
    const Distribution pi = random_distribution(n, 9800 + k, 0.2);
    RowVector v = RowVector::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) v(i) = u(rng);
    v(1) = 0.0;
    v(1) = -v.sum();
    if (std::abs(v(0)) < 0.05 || std::abs(v(1)) < 0.05) continue;
    v /= v.cwiseAbs().maxCoeff();
    const double lambda = 0.5 + 0.2 * k;
    // Shrink the coupling until every rate is admissible.
    for (double mu = 0.5 * lambda; mu > 1e-6; mu *= 0.5) {
      try {
        const ChainSpec c = coupled_pair_chain(pi, lambda, mu, TangentVector::from(v));
        pair_eig = std::max(pair_eig, (v * c.generator.rates() + lambda * v).cwiseAbs().maxCoeff() / lambda);
        pair_db = std::max(pair_db, check_detailed_balance(c.generator).asymmetry);
        ++built;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MuTooLarge) throw;
      }
    }
  }
  const bool ok = star_worst <= 1e-12 && built == 20 && pair_eig <= 1e-12 && pair_db <= 1e-12;
  return {ok, "star |uQ + lambda u| / lambda " + sci(star_worst) + "; coupled pair (" + std::to_string(built) +
                  " chains) eigen residual " + sci(pair_eig) + ", balance asymmetry " + sci(pair_db) +
                  " (limits 1e-12)"};
}

Outcome criterion_numerical_hygiene(const std::vector<ChainSpec>& corpus) {
  // RK4 order: dt versus dt/2 from the first start of each chain.
  double worst_ratio = std::numeric_limits<double>::infinity();
  double worst_coarse_ratio = std::numeric_limits<double>::infinity();
  bool order_ok = true;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const GradientStructure gs = canonical_structure(corpus[i].generator);
    const MetricField g = MetricField::constant(gs.metric());
    const Distribution rho0 = starts_for(corpus[i], static_cast<int>(i)).front();
    const double coarse = compare_flows(corpus[i].generator, g, gs.functional(), rho0, kTEnd, kDt);
    const double fine = compare_flows(corpus[i].generator, g, gs.functional(), rho0, kTEnd, kDt / 2.0);
    if (fine > 1e-9) {
      order_ok = order_ok && coarse / fine >= 8.0;
      worst_ratio = std::min(worst_ratio, coarse / fine);
    }
    // At dt = 1e-3 most errors already sit at the floor, so repeat with
    // coarser steps where the fourth-order term dominates.
    const double big = compare_flows(corpus[i].generator, g, gs.functional(), rho0, kTEnd, 8 * kDt);
    const double half = compare_flows(corpus[i].generator, g, gs.functional(), rho0, kTEnd, 4 * kDt);
    if (half > 1e-9) {
      order_ok = order_ok && big / half >= 8.0;
      worst_coarse_ratio = std::min(worst_coarse_ratio, big / half);
    }
  }

  // Entropy decay along the semigroup, for the flow corpus and oscillatory chains.
  std::vector<ChainSpec> chains = corpus;
  for (Eigen::Index n : {3, 4, 5}) chains.push_back(cyclic_chain(n));
  double worst_rise = 0.0;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const Distribution rho0 = random_distribution(chains[i].generator.n_states(), 9900 + i, 0.05);
    const Trajectory t = semigroup_trajectory(chains[i].generator, rho0, kTEnd, 0.01);
    for (std::size_t k = 1; k < t.size(); ++k) {
      worst_rise = std::max(worst_rise, rel_entropy(t.states[k], chains[i].pi) - rel_entropy(t.states[k - 1], chains[i].pi));
    }
  }

  double worst_hessian = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Distribution pi = random_distribution(3 + k % 6, 9950 + k, 0.2);
    const Matrix exact = entropy_hessian_at_pi(pi).matrix();
    const Matrix fd = fd_hessian(relative_entropy_functional(pi), pi).matrix();
    worst_hessian = std::max(worst_hessian, max_abs(fd - exact) / max_abs(exact));
  }

  const bool ok = order_ok && worst_rise <= 1e-10 && worst_hessian <= 1e-4;
  const auto ratio = [](double r) { return std::isinf(r) ? std::string("all at floor") : sci(r); };
  return {ok, "RK4 halving factor min " + ratio(worst_ratio) + " at dt=1e-3, " + ratio(worst_coarse_ratio) +
                  " at dt=8e-3 (need >= 8 above 1e-9); entropy rise " + sci(worst_rise) +
                  " (limit 1e-10); fd Hessian relative error " + sci(worst_hessian) + " (limit 1e-4)"};
}

std::string fixture(const std::string& name) { return std::string(GRADFLOW_FIXTURE_DIR) + "/" + name; }

std::string run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "gradflow");
  std::ostringstream out;
  std::ostringstream err;
  code = cli::run(args, out, err);
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reads back a double written with 17 significant digits; exact for finite values.
bool same(const Json& j, double x) { return j.is_number() && j.get<double>() == x; }

bool same(const Json& j, const RowVector& v) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != v.size()) return false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!same(j[static_cast<std::size_t>(i)], v(i))) return false;
  }
  return true;
}

bool same(const Json& j, const Matrix& m) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != m.rows()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!same(j[static_cast<std::size_t>(i)], RowVector(m.row(i)))) return false;
  }
  return true;
}

bool analyze_matches_library(const Json& j, const std::string& path) {
  const ChainFile chain = read_chain_file(path);
  const Generator q = validate_generator(chain.rates);
  const Distribution pi = stationary_distribution(q);
  const SpectralDecomposition s = left_eigen(q);
  const Verdict v = is_gradient_flow_representable(s);
  const DetailedBalance db = check_detailed_balance(q);
  bool ok = same(j["stationary"], pi.mass()) && j["reversible"] == db.reversible &&
            same(j["detailed_balance_asymmetry"], db.asymmetry) && j["representable"] == std::string(to_string(v)) &&
            j["verdicts"]["entropy_gradient_flow"] == db.reversible &&
            j["verdicts"]["some_gradient_flow"] == (v == Verdict::Yes) && j["eigenvalues"].size() == s.eigenvalues.size();
  for (std::size_t k = 0; ok && k < s.eigenvalues.size(); ++k) {
    ok = same(j["eigenvalues"][k][0], s.eigenvalues[k].real()) && same(j["eigenvalues"][k][1], s.eigenvalues[k].imag());
  }
  if (ok && v == Verdict::Yes) {
    const GradientStructure gs = canonical_structure(q);
    const Json& cs = j["canonical_structure"];
    ok = same(cs["metric"], gs.metric().matrix());
    for (std::size_t k = 0; ok && k < gs.eigenvalues().size(); ++k) {
      ok = same(cs["eigenvalues"][k], gs.eigenvalues()[k]) && same(cs["eigenbasis"][k], gs.eigenbasis()[k].delta());
    }
  } else if (ok) {
    ok = j["canonical_structure"].is_null();
  }
  return ok;
}

bool construct_matches_library(const Json& j, const std::string& path, const std::string& mode, int code) {
  const Generator q = validate_generator(read_chain_file(path).rates);
  const Distribution pi = stationary_distribution(q);
  if (mode == "entropy") {
    const MetricAtPi g = metric_at_pi(q, entropy_hessian_at_pi(pi));
    return code == 0 && same(j["metric"], g.g) && j["status"] == std::string(to_string(g.status));
  }
  if (is_gradient_flow_representable(q) != Verdict::Yes) return code == cli::kNotRepresentable;
  const GradientStructure gs = canonical_structure(q);
  bool ok = code == 0 && same(j["metric"], gs.metric().matrix()) && same(j["pi"], pi.mass());
  for (std::size_t k = 0; ok && k < gs.eigenvalues().size(); ++k) {
    ok = same(j["eigenvalues"][k], gs.eigenvalues()[k]) && same(j["eigenbasis"][k], gs.eigenbasis()[k].delta());
  }
  return ok;
}

Outcome criterion_cli_golden() {
  int checks = 0;
  std::string failed;
  const auto note = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && failed.empty()) failed = what;
  };

  for (const std::string name : {"two_state.json", "cyclic3.json", "star.json"}) {
    const std::string path = fixture(name);
    int c1 = 0;
    int c2 = 0;
    const std::string a1 = run_cli({"analyze", path}, c1);
    const std::string a2 = run_cli({"analyze", path}, c2);
    note(c1 == 0 && c2 == 0 && a1 == a2, "analyze " + name + " not stable");
    note(c1 == 0 && analyze_matches_library(Json::parse(a1), path), "analyze " + name + " differs from library");

    for (const std::string mode : {"entropy", "canonical"}) {
      const std::string o1 = run_cli({"construct", path, "--functional", mode}, c1);
      const std::string o2 = run_cli({"construct", path, "--functional", mode}, c2);
      note(c1 == c2 && o1 == o2, "construct " + mode + " " + name + " not stable");
      note(construct_matches_library(o1.empty() ? Json() : Json::parse(o1), path, mode, c1),
           "construct " + mode + " " + name + " differs from library");
    }
  }

  int c1 = 0;
  int c2 = 0;
  const std::string z1 = run_cli({"zoo", "star", "--pi", "0.25,0.25,0.5", "--lambda", "2"}, c1);
  const std::string z2 = run_cli({"zoo", "star", "--pi", "0.25,0.25,0.5", "--lambda", "2"}, c2);
  note(c1 == 0 && z1 == z2 && z1 == slurp(fixture("star.json")), "zoo star differs from fixture");
  note(parse_chain(Json::parse(z1)).rates == star_chain(Distribution::from({0.25, 0.25, 0.5}), 2.0).generator.rates(),
       "zoo star rates differ from library");
  const std::string r1 = run_cli({"zoo", "random-reversible", "--pi", "0.2,0.3,0.5", "--seed", "7"}, c1);
  const std::string r2 = run_cli({"zoo", "random-reversible", "--pi", "0.2,0.3,0.5", "--seed", "7"}, c2);
  note(c1 == 0 && r1 == r2, "zoo random-reversible not stable");
  note(parse_chain(Json::parse(r1)).rates ==
           random_reversible(Distribution::from({0.2, 0.3, 0.5}), 7).generator.rates(),
       "zoo random-reversible differs from library");
  const std::string y1 = run_cli({"zoo", "cyclic", "--n", "3"}, c1);
  note(c1 == 0 && parse_chain(Json::parse(y1)).rates == parse_chain(Json::parse(slurp(fixture("cyclic3.json")))).rates,
       "zoo cyclic differs from fixture");

  return {failed.empty(), failed.empty() ? std::to_string(checks) + " golden checks identical across runs and library"
                                         : "first mismatch: " + failed};
}

}  // namespace

int main() {
  const auto wall = std::chrono::steady_clock::now();
  std::vector<ChainSpec> corpus;
  std::vector<ChainSpec> reversible;
  try {
    corpus = flow_corpus();
    reversible = reversible_corpus();
  } catch (const std::exception& e) {
    std::printf("FAIL  corpus construction: %s\n", e.what());
    return 1;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1  converse construction equals exp(tQ)", [&] { return criterion_converse_equivalence(corpus); }},
      {"2  generator recovered from g|pi and M", [&] { return criterion_roundtrip(reversible); }},
      {"3  orthonormal Qbar = -Mbar, symmetric", [&] { return criterion_orthonormal_symmetry(reversible); }},
      {"4  entropy metric iff reversible", [&] { return criterion_dichotomy(reversible); }},
      {"5  perturbed metric, same flow", [] { return criterion_non_uniqueness(); }},
      {"6  cyclic chains not representable", [] { return criterion_cyclic(); }},
      {"7  entropy compatibility checker", [] { return criterion_compatibility_checker(); }},
      {"8  star and coupled-pair families", [] { return criterion_chain_families(); }},
      {"9  numerical hygiene", [&] { return criterion_numerical_hygiene(corpus); }},
      {"10 CLI golden outputs", [] { return criterion_cli_golden(); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s  %-42s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall).count();
  std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failures, criteria.size(), total);
  return failures == 0 ? 0 : 1;
}
