#include "gradflow/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "gradflow/errors.hpp"
#include "gradflow/spectral.hpp"
#include "gradflow/structure.hpp"

namespace gradflow {

namespace {

constexpr double kNonReversibleMargin = 1e-3;

void ensure(bool condition, const std::string& what) {
  if (!condition) throw std::logic_error("zoo construction check failed: " + what);
}

// Q = Pi^{-1} S with the diagonal chosen so rows sum to zero exactly.
Generator from_symmetric_flux(const Matrix& s, const Distribution& pi) {
  const Eigen::Index n = s.rows();
  Matrix q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double out = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      q(i, j) = s(i, j) / pi[i];
      out += q(i, j);
    }
    q(i, i) = -out;
  }
  return validate_generator(q);
}

}  // namespace

bool ChainSpec::has_tag(const std::string& tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

ChainSpec make_chain_spec(std::string name, const Generator& q) {
  Distribution pi = stationary_distribution(q);
  std::vector<std::string> tags;
  if (check_detailed_balance(q).reversible) tags.emplace_back("reversible");
  const SpectralDecomposition spec = left_eigen(q);
  if (is_gradient_flow_representable(spec) == Verdict::Yes) tags.emplace_back("diagonalisable");
  if (!spec.real) tags.emplace_back("oscillatory");
  return ChainSpec{std::move(name), q, std::move(pi), std::move(tags)};
}

ChainSpec star_chain(const Distribution& pi, double lambda) {
  const Eigen::Index n = pi.size();
  if (n < 2) throw Error(ErrorCode::InvalidPi, "star chain needs at least 2 states");
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidParameter, "lambda must be positive");
  const Eigen::Index d = n - 1;

  Matrix s = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < d; ++i) {
    s(i, d) = pi[i] * lambda;
    s(d, i) = pi[i] * lambda;
  }
  const Generator q = from_symmetric_flux(s, pi);
  ChainSpec spec = make_chain_spec("star", q);

  ensure(is_irreducible(q), "star chain irreducible");
  ensure(spec.has_tag("reversible"), "star chain reversible");
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    RowVector u = RowVector::Zero(n);
    u(i) = 1.0;
    u(d - 1) = -1.0;
    ensure((u * q.rates() + lambda * u).cwiseAbs().maxCoeff() <= 1e-10 * lambda,
           "star chain eigenspace");
  }
  return spec;
}

ChainSpec coupled_pair_chain(const Distribution& pi, double lambda, double mu, const TangentVector& v) {
  const Eigen::Index n = pi.size();
  if (n < 3) throw Error(ErrorCode::InvalidPi, "coupled pair chain needs at least 3 states");
  if (!(lambda > 0.0) || !(mu > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "lambda and mu must be positive");
  }
  const Eigen::Index d = n - 1;
  const double vscale = v.delta().cwiseAbs().maxCoeff();
  if (v.size() != n || v[0] == 0.0 || v[1] == 0.0 || std::abs(v[d]) > 1e-12 * vscale) {
    throw Error(ErrorCode::InvalidV, "v must have v_0 != 0, v_1 != 0 and v_d = 0");
  }

  const double beta0 = mu * pi[0] * v[1] / (v[0] * pi[1]);
  const double beta1 = mu * pi[1] * v[0] / (v[1] * pi[0]);
  const double gamma = -(1.0 - pi[d]) * lambda - beta0 - beta1 + 2.0 * mu;

  Matrix s = Matrix::Zero(n, n);
  s(0, 0) = -pi[0] * lambda - beta0;
  s(1, 1) = -pi[1] * lambda - beta1;
  s(0, 1) = mu;
  s(1, 0) = mu;
  s(0, d) = s(d, 0) = pi[0] * lambda + beta0 - mu;
  s(1, d) = s(d, 1) = pi[1] * lambda + beta1 - mu;
  for (Eigen::Index i = 2; i < d; ++i) {
    s(i, i) = -pi[i] * lambda;
    s(i, d) = s(d, i) = pi[i] * lambda;
  }
  s(d, d) = gamma;

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && s(i, j) < 0.0) {
        throw Error(ErrorCode::MuTooLarge, "rate " + std::to_string(i) + "->" + std::to_string(j) +
                                               " is negative for mu=" + std::to_string(mu));
      }
    }
  }

  const Generator q = from_symmetric_flux(s, pi);
  ChainSpec spec = make_chain_spec("coupled-pair", q);
  ensure(is_irreducible(q), "coupled pair chain irreducible");
  ensure(spec.has_tag("reversible"), "coupled pair chain reversible");
  ensure((spec.pi.mass() - pi.mass()).cwiseAbs().maxCoeff() <= 1e-10, "coupled pair stationary");
  ensure((v.delta() * q.rates() + lambda * v.delta()).cwiseAbs().maxCoeff() <= 1e-9 * lambda * vscale,
         "coupled pair eigenvector");
  return spec;
}

ChainSpec random_reversible(const Distribution& pi, std::uint64_t seed) {
  const Eigen::Index n = pi.size();
  if (n < 2) throw Error(ErrorCode::InvalidPi, "need at least 2 states");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  Matrix s = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) s(i, j) = s(j, i) = weight(rng);
  }
  const Generator q = from_symmetric_flux(s, pi);
  ChainSpec spec = make_chain_spec("random-reversible", q);
  ensure(spec.has_tag("reversible"), "random chain reversible");
  return spec;
}

ChainSpec random_nonreversible_diagonalisable(Eigen::Index n_states, std::uint64_t seed, int max_tries) {
  if (n_states < 3) {
    throw Error(ErrorCode::InvalidParameter, "every 2-state chain is reversible; need n_states >= 3");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rate(0.1, 1.0);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Matrix raw(n_states, n_states);
    for (Eigen::Index i = 0; i < n_states; ++i) {
      double out = 0.0;
      for (Eigen::Index j = 0; j < n_states; ++j) {
        if (j == i) continue;
        raw(i, j) = rate(rng);
        out += raw(i, j);
      }
      raw(i, i) = -out;
    }
    const Generator q = validate_generator(raw);
    const DetailedBalance balance = check_detailed_balance(q);
    if (balance.asymmetry <= kNonReversibleMargin * balance.scale) continue;
    if (is_gradient_flow_representable(q) != Verdict::Yes) continue;
    return make_chain_spec("random-nonrev-diag", q);
  }
  throw Error(ErrorCode::ExhaustedTries, "no non-reversible real diagonalisable chain in " +
                                             std::to_string(max_tries) + " tries");
}

ChainSpec cyclic_chain(Eigen::Index n_states, double rate) {
  if (n_states < 3) throw Error(ErrorCode::InvalidParameter, "cyclic chain needs n_states >= 3");
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidParameter, "rate must be positive");
  Matrix q = Matrix::Zero(n_states, n_states);
  for (Eigen::Index i = 0; i < n_states; ++i) {
    q(i, i) = -rate;
    q(i, (i + 1) % n_states) = rate;
  }
  return make_chain_spec("cyclic", validate_generator(q));
}

Distribution random_distribution(Eigen::Index n_states, std::uint64_t seed, double floor) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RowVector p(n_states);
  for (Eigen::Index i = 0; i < n_states; ++i) p(i) = floor + unit(rng);
  p /= p.sum();
  return Distribution::from(std::move(p));
}

}  // namespace gradflow
