#include "gradflow/markov_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradflow/errors.hpp"
#include "gradflow/expm.hpp"

namespace gradflow {

Generator::Generator(Matrix q) : q_(std::move(q)), max_abs_(q_.cwiseAbs().maxCoeff()) {}

Generator validate_generator(const Matrix& raw) {
  if (raw.rows() != raw.cols() || raw.rows() < 2) {
    throw Error(ErrorCode::InvalidShape, "generator must be square with at least 2 states, got " +
                                             std::to_string(raw.rows()) + "x" +
                                             std::to_string(raw.cols()));
  }
  if (!raw.allFinite()) throw Error(ErrorCode::InvalidShape, "generator has non-finite entries");

  const Eigen::Index n = raw.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && raw(i, j) < 0.0) {
        throw Error(ErrorCode::NegativeOffDiagonal,
                    "Q(" + std::to_string(i) + "," + std::to_string(j) + ") < 0");
      }
    }
  }

  Matrix q = raw;
  const double tol = kRowSumTolerance * raw.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = q.row(i).sum();
    if (std::abs(s) > tol) {
      throw Error(ErrorCode::RowSumNonzero,
                  "row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
    // snap: the diagonal absorbs decimal round-off
    q(i, i) -= s;
  }
  return Generator(std::move(q));
}

Distribution Distribution::from(RowVector mass) {
  if (mass.size() < 1 || !mass.allFinite()) {
    throw Error(ErrorCode::InvalidDistribution, "distribution must be finite and non-empty");
  }
  if ((mass.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidDistribution, "distribution entries must be strictly positive");
  }
  if (std::abs(mass.sum() - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::InvalidDistribution,
                "distribution must sum to 1, got " + std::to_string(mass.sum()));
  }
  return Distribution(std::move(mass));
}

Distribution Distribution::from(std::initializer_list<double> mass) {
  RowVector v(static_cast<Eigen::Index>(mass.size()));
  Eigen::Index i = 0;
  for (double m : mass) v(i++) = m;
  return from(std::move(v));
}

Distribution Distribution::uniform(Eigen::Index n_states) {
  return from(RowVector::Constant(n_states, 1.0 / static_cast<double>(n_states)));
}

TangentVector TangentVector::from(RowVector delta) {
  if (delta.size() < 2 || !delta.allFinite()) {
    throw Error(ErrorCode::InvalidTangentVector, "tangent vector must be finite with >= 2 entries");
  }
  const double scale = std::max(1.0, delta.cwiseAbs().maxCoeff());
  if (std::abs(delta.sum()) > kMassTolerance * scale) {
    throw Error(ErrorCode::InvalidTangentVector,
                "tangent vector must sum to 0, got " + std::to_string(delta.sum()));
  }
  return TangentVector(std::move(delta));
}

TangentVector TangentVector::from_coords(const RowVector& coords) {
  return TangentVector(expand_coords(coords));
}

RowVector expand_coords(const RowVector& coords) {
  RowVector v(coords.size() + 1);
  v.head(coords.size()) = coords;
  v(coords.size()) = -coords.sum();
  return v;
}

StochasticMatrix StochasticMatrix::from(Matrix entries) {
  if (entries.rows() != entries.cols() || (entries.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidShape, "stochastic matrix must be square and non-negative");
  }
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    if (std::abs(entries.row(i).sum() - 1.0) > kMassTolerance) {
      throw Error(ErrorCode::RowSumNonzero, "stochastic row " + std::to_string(i) + " does not sum to 1");
    }
  }
  return StochasticMatrix(std::move(entries));
}

namespace {

// Marks every state reachable from state 0, following (i -> j) edges when
// forward, or (j -> i) edges otherwise.
std::vector<bool> reachable_from_zero(const Matrix& q, bool forward) {
  const Eigen::Index n = q.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double rate = forward ? q(i, j) : q(j, i);
      if (j != i && rate > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_irreducible(const Generator& q) {
  // Kosaraju: strongly connected iff every state reaches 0 and is reached from 0.
  for (bool forward : {true, false}) {
    const auto seen = reachable_from_zero(q.rates(), forward);
    for (bool s : seen) {
      if (!s) return false;
    }
  }
  return true;
}

Distribution stationary_distribution(const Generator& q, double residual_tol) {
  if (!is_irreducible(q)) throw Error(ErrorCode::NotIrreducible, "generator is not irreducible");

  const Eigen::Index n = q.n_states();
  // pi [Q | 1] = (0, ..., 0, 1): one balance equation is replaced by normalisation.
  Matrix a = q.rates();
  a.col(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::FullPivLU<Matrix> lu(a.transpose());
  if (!lu.isInvertible()) throw Error(ErrorCode::NotIrreducible, "stationary system is singular");
  RowVector pi = lu.solve(rhs).transpose();
  pi /= pi.sum();

  const double residual = (pi * q.rates()).cwiseAbs().maxCoeff();
  if (residual > residual_tol * q.max_abs() || (pi.array() <= 0.0).any()) {
    throw Error(ErrorCode::NotIrreducible,
                "stationary solve failed (residual " + std::to_string(residual) + ")");
  }
  return Distribution::from(std::move(pi));
}

Distribution semigroup_evolve(const Generator& q, const Distribution& mu, double t) {
  if (mu.size() != q.n_states()) throw Error(ErrorCode::DimensionMismatch, "mu has wrong size");
  if (t == 0.0) return mu;
  RowVector out = mu.mass() * expm(t * q.rates());
  // Remove the last few ulps of mass drift from the squaring phase.
  out /= out.sum();
  return Distribution::from(std::move(out));
}

Trajectory semigroup_trajectory(const Generator& q, const Distribution& mu, double t_end, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::InvalidShape, "t_end and dt must be positive");
  }
  const auto steps = static_cast<long>(std::floor(t_end / dt + 1e-9));
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps + 1));
  traj.states.reserve(static_cast<std::size_t>(steps + 1));
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    traj.times.push_back(t);
    traj.states.push_back(semigroup_evolve(q, mu, t));
  }
  return traj;
}

Uniformization uniformize(const Generator& q) {
  const double max_diag = q.rates().diagonal().cwiseAbs().maxCoeff();
  if (max_diag == 0.0) throw Error(ErrorCode::ZeroGenerator, "cannot uniformize the zero generator");
  const double alpha = 1.0 / max_diag;
  const Eigen::Index n = q.n_states();
  Matrix k = Matrix::Identity(n, n) + alpha * q.rates();
  // Entries that are zero in exact arithmetic may come out as -1e-17.
  k = k.cwiseMax(0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) off += k(i, j);
    }
    k(i, i) = std::max(0.0, 1.0 - off);
  }
  return {StochasticMatrix::from(std::move(k)), alpha};
}

}  // namespace gradflow
