#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "gradflow/markov_core.hpp"

namespace gradflow {

/// A linear functional on T, stored by its values on the tangent basis.
using Covector = RowVector;

/// Symmetric bilinear form on T in tangent-basis coordinates:
/// B(v, w) = coords(v) * matrix * coords(w)^T.
class BilinearFormOnT {
 public:
  /// Throws InvalidShape unless square and symmetric within 1e-10 relative.
  static BilinearFormOnT from(Matrix m);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  double operator()(const TangentVector& v, const TangentVector& w) const;
  double on_coords(const RowVector& x, const RowVector& y) const { return x * m_ * y.transpose(); }

 private:
  explicit BilinearFormOnT(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Black-box functional on the open simplex, optionally with an analytic
/// derivative. Both callables must be safe to invoke concurrently.
struct Functional {
  std::function<double(const Distribution&)> evaluate;
  /// Derivative at a point as a covector on T; empty means finite differences.
  std::function<Covector(const Distribution&)> gradient;
};

/// H(rho | pi) = sum rho_i log(rho_i / pi_i), natural log.
double rel_entropy(const Distribution& rho, const Distribution& pi);

/// c * H(. | pi), with its analytic gradient.
Functional relative_entropy_functional(const Distribution& pi, double scale = 1.0);

/// 1/2 (rho - center) A (rho - center)^T for an ambient (d+1)x(d+1) matrix A.
Functional ambient_quadratic(const Matrix& a, const RowVector& center);

/// sum_k coef_k * prod_i rho_i^powers_k[i].
struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;
};
Functional polynomial_functional(std::vector<Monomial> terms, Eigen::Index n_states);

/// The Hessian of H(. | pi) at pi restricted to T:
/// N(w, v) = sum_a w_a v_a / pi_a.
BilinearFormOnT entropy_hessian_at_pi(const Distribution& pi);

inline constexpr double kGradientStep = 1e-5;
inline constexpr double kHessianStep = 1e-4;

/// Central differences along the tangent basis. Needs min(rho) > 2h.
Covector fd_gradient(const Functional& f, const Distribution& rho, double h = kGradientStep);

/// Four-point mixed central differences, symmetrised. Needs min(rho) > 4h.
BilinearFormOnT fd_hessian(const Functional& f, const Distribution& rho, double h = kHessianStep);

/// Ratio alpha_v with M(v, .) = alpha_v N(v, .), or nullopt when the two
/// covectors are not parallel within 1e-8 relative. Throws DegenerateN when
/// N(v, .) vanishes.
std::optional<double> proportionality_profile(const BilinearFormOnT& m, const BilinearFormOnT& n,
                                              const TangentVector& v);

enum class Incompatibility { None, NonzeroGradient, HessianNotProportional, AlphaNotPositive };

std::string_view to_string(Incompatibility reason);

struct CompatibilityResult {
  bool compatible = false;
  double alpha = 0.0;
  Incompatibility reason = Incompatibility::None;
  double gradient_sup = 0.0;
  double hessian_residual = 0.0;
  /// max(1, max |Hessian entry|); the gradient threshold is 1e-6 times this.
  double scale = 1.0;
};

/// Checks the 2-jet condition dF(pi) = 0, d2F(pi) = alpha d2H(pi), alpha > 0.
CompatibilityResult entropy_compatibility_check(const Functional& f, const Distribution& pi);

}  // namespace gradflow
