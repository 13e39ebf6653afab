#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gradflow {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Vector = Eigen::VectorXd;

/// Relative tolerance used when snapping generator row sums to zero.
inline constexpr double kRowSumTolerance = 1e-12;
/// Absolute tolerance on the total mass of a distribution.
inline constexpr double kMassTolerance = 1e-12;
/// Default relative residual tolerance for stationarity checks.
inline constexpr double kResidualTolerance = 1e-10;

/// Rate matrix of a finite continuous-time Markov chain, row convention:
/// entry (i, j), i != j, is the jump rate from state i to state j.
/// Instances are only produced by validate_generator.
class Generator {
 public:
  const Matrix& rates() const noexcept { return q_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return q_(i, j); }

  Eigen::Index n_states() const noexcept { return q_.rows(); }
  /// d, the dimension of the simplex (n_states - 1).
  Eigen::Index dim() const noexcept { return q_.rows() - 1; }
  /// max |Q_ij|, the scale used by every relative tolerance in the library.
  double max_abs() const noexcept { return max_abs_; }

 private:
  explicit Generator(Matrix q);
  friend Generator validate_generator(const Matrix& raw);

  Matrix q_;
  double max_abs_ = 0.0;
};

/// Strictly positive probability row vector (a point of the open simplex).
class Distribution {
 public:
  /// Throws InvalidDistribution unless all entries are > 0 and sum to 1.
  static Distribution from(RowVector mass);
  static Distribution from(std::initializer_list<double> mass);
  static Distribution uniform(Eigen::Index n_states);

  const RowVector& mass() const noexcept { return mass_; }
  double operator[](Eigen::Index i) const { return mass_(i); }
  Eigen::Index size() const noexcept { return mass_.size(); }

 private:
  explicit Distribution(RowVector mass) : mass_(std::move(mass)) {}
  RowVector mass_;
};

/// Zero-sum row vector, an element of the tangent space T of the simplex.
///
/// Coordinates: with the fixed basis b_i = e_i - e_d (i = 0..d-1), a tangent
/// vector v has coordinates x_i = v_i; the last entry is implied.
class TangentVector {
 public:
  /// Throws InvalidTangentVector if the entries do not sum to zero.
  static TangentVector from(RowVector delta);
  static TangentVector from_coords(const RowVector& coords);

  const RowVector& delta() const noexcept { return delta_; }
  double operator[](Eigen::Index i) const { return delta_(i); }
  Eigen::Index size() const noexcept { return delta_.size(); }
  /// Coordinates in the tangent basis (drops the last entry).
  RowVector coords() const { return delta_.head(delta_.size() - 1); }

 private:
  explicit TangentVector(RowVector delta) : delta_(std::move(delta)) {}
  RowVector delta_;
};

/// Expands tangent-basis coordinates into an ambient zero-sum vector.
RowVector expand_coords(const RowVector& coords);

/// Row-stochastic matrix K.
class StochasticMatrix {
 public:
  static StochasticMatrix from(Matrix entries);
  const Matrix& entries() const noexcept { return k_; }

 private:
  explicit StochasticMatrix(Matrix k) : k_(std::move(k)) {}
  Matrix k_;
};

/// Sampled law of a chain, or a sampled gradient-flow curve.
struct Trajectory {
  std::vector<double> times;
  std::vector<Distribution> states;

  std::size_t size() const noexcept { return times.size(); }
};

Generator validate_generator(const Matrix& raw);

bool is_irreducible(const Generator& q);

/// Solves {pi Q = 0, sum(pi) = 1} densely. Throws NotIrreducible for
/// reducible chains or when the residual exceeds residual_tol * max|Q|.
Distribution stationary_distribution(const Generator& q, double residual_tol = kResidualTolerance);

/// mu * exp(tQ), evaluated with the scaling-and-squaring exponential.
Distribution semigroup_evolve(const Generator& q, const Distribution& mu, double t);

/// Samples mu * exp(t_k Q) at t_k = k * dt, each evaluated from mu directly.
Trajectory semigroup_trajectory(const Generator& q, const Distribution& mu, double t_end, double dt);

struct Uniformization {
  StochasticMatrix kernel;
  double alpha;
};

/// K = I + alpha Q with alpha = 1 / max_i |Q_ii|.
Uniformization uniformize(const Generator& q);

}  // namespace gradflow
