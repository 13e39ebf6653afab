#pragma once

#include <string_view>
#include <vector>

#include "gradflow/entropy.hpp"
#include "gradflow/markov_core.hpp"

namespace gradflow {

/// The action of Q on T in tangent coordinates: row i holds the
/// coordinates of b_i Q, so that w Q has coordinates x * restrict_to_tangent(q).
Matrix restrict_to_tangent(const Generator& q);

enum class MetricStatus { Metric, Asymmetric, NotPositiveDefinite };

std::string_view to_string(MetricStatus status);

/// Outcome of solving Qbar G = -Mbar. When the solution is not a metric the
/// matrix is kept, since its asymmetry is the reversibility evidence.
struct MetricAtPi {
  MetricStatus status = MetricStatus::Metric;
  Matrix g;
  /// max |G - G^T| / max |G|
  double asymmetry = 0.0;
  /// Smallest eigenvalue of the symmetric part of G.
  double min_eigenvalue = 0.0;

  bool is_metric() const noexcept { return status == MetricStatus::Metric; }
  /// Throws SingularMetric unless is_metric().
  BilinearFormOnT form() const;
};

/// The unique g|pi with g|pi(wQ, v) = -M(w, v) for all v, w in T.
MetricAtPi metric_at_pi(const Generator& q, const BilinearFormOnT& m);

struct RecoveredGenerator {
  /// Qbar = -Mbar G^{-1}, the action on T in tangent coordinates.
  Matrix tangent_action;
  /// The full (d+1)x(d+1) matrix, fixed by pi Q = 0.
  Matrix ambient;
};

/// Inverse of metric_at_pi: the generator determined by g|pi, M and pi.
RecoveredGenerator recover_generator(const BilinearFormOnT& g_pi, const BilinearFormOnT& m,
                                     const Distribution& pi);

/// Q and M expressed in a g-orthonormal basis of T (Cholesky frame).
/// For a metric solving the linearised flow identity, q_bar == -m_bar.
struct OrthonormalRepresentation {
  Matrix q_bar;
  Matrix m_bar;
  /// Rows are the tangent coordinates of the orthonormal basis vectors.
  Matrix frame;
};

OrthonormalRepresentation orthonormal_representation(const Generator& q, const BilinearFormOnT& g,
                                                     const BilinearFormOnT& m);

/// Constant metric and quadratic functional realising exp(tQ) as a gradient
/// flow for a real diagonalisable generator. With mu = pi + sum a_i f_i the
/// metric is g(f_i, f_j) = delta_ij and F(mu) = 1/2 sum (-lambda_i) a_i^2.
class GradientStructure {
 public:
  const Distribution& pi() const noexcept { return pi_; }
  const std::vector<TangentVector>& eigenbasis() const noexcept { return eigenbasis_; }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  const BilinearFormOnT& metric() const noexcept { return metric_; }

  /// Eigenbasis coordinates a of mu - pi.
  RowVector coordinates(const Distribution& mu) const;
  double functional_value(const Distribution& mu) const;
  Covector functional_gradient(const Distribution& mu) const;
  Functional functional() const;

 private:
  GradientStructure(Distribution pi, std::vector<TangentVector> basis, std::vector<double> values);
  friend GradientStructure canonical_structure(const Generator& q);

  Distribution pi_;
  std::vector<TangentVector> eigenbasis_;
  std::vector<double> eigenvalues_;
  Matrix frame_inv_;
  BilinearFormOnT metric_;
};

/// Throws NotRepresentable unless the spectral verdict is yes.
GradientStructure canonical_structure(const Generator& q);

struct DetailedBalance {
  bool reversible = false;
  /// max_ij |pi_i Q_ij - pi_j Q_ji|
  double asymmetry = 0.0;
  /// max |Pi Q|
  double scale = 0.0;
};

DetailedBalance check_detailed_balance(const Generator& q, double rel_tol = kResidualTolerance);

/// a = -Pi Q for a reversible chain; symmetric with zero row and column sums.
Matrix reversibility_witness(const Generator& q);

}  // namespace gradflow
