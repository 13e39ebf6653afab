#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "gradflow/markov_core.hpp"

namespace gradflow {

using ComplexMatrix = Eigen::MatrixXcd;

/// |Im lambda| <= kRealTolerance * max|Q| counts as a real eigenvalue.
inline constexpr double kRealTolerance = 1e-9;
/// Eigenvector matrices with condition number at or above this are treated as defective.
inline constexpr double kConditionLimit = 1e8;

/// Left eigenstructure v_i Q = lambda_i v_i of a generator.
///
/// Index 0 holds the zero eigenvalue, its eigenvector scaled to unit mass
/// (the stationary distribution). The rest are ordered by decreasing real
/// part, then decreasing imaginary part, each scaled to unit max-modulus
/// with the first non-negligible entry real and positive.
struct SpectralDecomposition {
  std::vector<std::complex<double>> eigenvalues;
  /// Row i is the left eigenvector for eigenvalues[i].
  ComplexMatrix left_eigenvectors;
  bool diagonalisable = false;
  bool real = false;

  /// Condition number of the (unit 2-norm rows) eigenvector matrix.
  double eigenvector_condition = 0.0;
  /// max |Im lambda| before cleanup, and the tolerance it was held to.
  double max_imag = 0.0;
  double imag_tolerance = 0.0;
};

SpectralDecomposition left_eigen(const Generator& q);

enum class Verdict { Yes, No, Borderline };

std::string_view to_string(Verdict v);

/// Real diagonalisability decision with a factor-10 borderline band around
/// both the realness tolerance and the conditioning limit.
Verdict is_gradient_flow_representable(const SpectralDecomposition& spec);
Verdict is_gradient_flow_representable(const Generator& q);

/// The fixed basis b_i = e_i - e_d, i = 0..d-1, of T.
std::vector<TangentVector> tangent_basis(Eigen::Index d);

/// The same basis as a d x (d+1) matrix, one basis vector per row.
Matrix tangent_basis_matrix(Eigen::Index d);

}  // namespace gradflow
