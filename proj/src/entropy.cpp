#include "gradflow/entropy.hpp"

#include <cmath>
#include <string>

#include "gradflow/errors.hpp"

namespace gradflow {

namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kParallelTolerance = 1e-8;
constexpr double kGradientTolerance = 1e-6;
constexpr double kProportionalTolerance = 1e-4;

void require_margin(const Distribution& rho, double margin) {
  if (rho.mass().minCoeff() <= margin) {
    throw Error(ErrorCode::BoundaryTooClose,
                "probe point within " + std::to_string(margin) + " of the simplex boundary");
  }
}

// rho + step * b_i (+ step2 * b_j).
Distribution shifted(const Distribution& rho, Eigen::Index i, double step,
                     Eigen::Index j = -1, double step2 = 0.0) {
  RowVector p = rho.mass();
  const Eigen::Index last = p.size() - 1;
  p(i) += step;
  p(last) -= step;
  if (j >= 0) {
    p(j) += step2;
    p(last) -= step2;
  }
  return Distribution::from(std::move(p));
}

}  // namespace

BilinearFormOnT BilinearFormOnT::from(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 1 || !m.allFinite()) {
    throw Error(ErrorCode::InvalidShape, "bilinear form must be a finite square matrix");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::InvalidShape, "bilinear form is not symmetric");
  }
  return BilinearFormOnT(std::move(m));
}

double BilinearFormOnT::operator()(const TangentVector& v, const TangentVector& w) const {
  if (v.size() != dim() + 1 || w.size() != dim() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "tangent vector does not match form dimension");
  }
  return on_coords(v.coords(), w.coords());
}

double rel_entropy(const Distribution& rho, const Distribution& pi) {
  if (rho.size() != pi.size()) throw Error(ErrorCode::DimensionMismatch, "rho and pi differ in size");
  double h = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i) h -= rho[i] * std::log(pi[i] / rho[i]);
  return h;
}

Functional relative_entropy_functional(const Distribution& pi, double scale) {
  Functional f;
  f.evaluate = [pi, scale](const Distribution& rho) { return scale * rel_entropy(rho, pi); };
  f.gradient = [pi, scale](const Distribution& rho) {
    if (rho.size() != pi.size()) throw Error(ErrorCode::DimensionMismatch, "rho and pi differ in size");
    const Eigen::Index d = rho.size() - 1;
    const double last = std::log(rho[d] / pi[d]);
    Covector g(d);
    for (Eigen::Index i = 0; i < d; ++i) g(i) = scale * (std::log(rho[i] / pi[i]) - last);
    return g;
  };
  return f;
}

Functional ambient_quadratic(const Matrix& a, const RowVector& center) {
  if (a.rows() != a.cols() || a.rows() != center.size()) {
    throw Error(ErrorCode::DimensionMismatch, "quadratic matrix does not match its center");
  }
  const Matrix sym = 0.5 * (a + a.transpose());
  Functional f;
  f.evaluate = [sym, center](const Distribution& rho) {
    if (rho.size() != center.size()) throw Error(ErrorCode::DimensionMismatch, "wrong dimension");
    const RowVector x = rho.mass() - center;
    return 0.5 * x.dot(x * sym);
  };
  f.gradient = [sym, center](const Distribution& rho) {
    if (rho.size() != center.size()) throw Error(ErrorCode::DimensionMismatch, "wrong dimension");
    const RowVector ambient = (rho.mass() - center) * sym;
    const Eigen::Index d = ambient.size() - 1;
    return Covector(ambient.head(d).array() - ambient(d));
  };
  return f;
}

Functional polynomial_functional(std::vector<Monomial> terms, Eigen::Index n_states) {
  for (const auto& t : terms) {
    if (static_cast<Eigen::Index>(t.powers.size()) != n_states) {
      throw Error(ErrorCode::DimensionMismatch, "monomial powers do not match the state count");
    }
    for (int p : t.powers) {
      if (p < 0) throw Error(ErrorCode::InvalidShape, "monomial powers must be non-negative");
    }
  }
  Functional f;
  f.evaluate = [terms = std::move(terms), n_states](const Distribution& rho) {
    if (rho.size() != n_states) throw Error(ErrorCode::DimensionMismatch, "wrong dimension");
    double total = 0.0;
    for (const auto& t : terms) {
      double value = t.coef;
      for (Eigen::Index i = 0; i < n_states; ++i) value *= std::pow(rho[i], t.powers[static_cast<std::size_t>(i)]);
      total += value;
    }
    return total;
  };
  return f;
}

BilinearFormOnT entropy_hessian_at_pi(const Distribution& pi) {
  const Eigen::Index d = pi.size() - 1;
  // b_i has +1 at i and -1 at d, so N_ij = delta_ij / pi_i + 1 / pi_d.
  Matrix n = Matrix::Constant(d, d, 1.0 / pi[d]);
  for (Eigen::Index i = 0; i < d; ++i) n(i, i) += 1.0 / pi[i];
  return BilinearFormOnT::from(std::move(n));
}

Covector fd_gradient(const Functional& f, const Distribution& rho, double h) {
  require_margin(rho, 2.0 * h);
  const Eigen::Index d = rho.size() - 1;
  Covector g(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    g(i) = (f.evaluate(shifted(rho, i, h)) - f.evaluate(shifted(rho, i, -h))) / (2.0 * h);
  }
  return g;
}

BilinearFormOnT fd_hessian(const Functional& f, const Distribution& rho, double h) {
  require_margin(rho, 4.0 * h);
  const Eigen::Index d = rho.size() - 1;
  Matrix hess(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      const double pp = f.evaluate(shifted(rho, i, h, j, h));
      const double pm = f.evaluate(shifted(rho, i, h, j, -h));
      const double mp = f.evaluate(shifted(rho, i, -h, j, h));
      const double mm = f.evaluate(shifted(rho, i, -h, j, -h));
      hess(i, j) = (pp - pm - mp + mm) / (4.0 * h * h);
      hess(j, i) = hess(i, j);
    }
  }
  return BilinearFormOnT::from(std::move(hess));
}

std::optional<double> proportionality_profile(const BilinearFormOnT& m, const BilinearFormOnT& n,
                                              const TangentVector& v) {
  if (m.dim() != n.dim() || v.size() != m.dim() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "forms and vector disagree in dimension");
  }
  const RowVector x = v.coords();
  const RowVector mv = x * m.matrix();
  const RowVector nv = x * n.matrix();
  const double nn = nv.squaredNorm();
  if (nn <= 1e-300 || std::sqrt(nn) <= 1e-14 * n.matrix().norm() * x.norm()) {
    throw Error(ErrorCode::DegenerateN, "N(v, .) vanishes");
  }
  const double alpha = mv.dot(nv) / nn;
  const double residual = (mv - alpha * nv).norm();
  if (residual > kParallelTolerance * std::max(mv.norm(), alpha * std::sqrt(nn))) return std::nullopt;
  return alpha;
}

std::string_view to_string(Incompatibility reason) {
  switch (reason) {
    case Incompatibility::None: return "None";
    case Incompatibility::NonzeroGradient: return "NonzeroGradient";
    case Incompatibility::HessianNotProportional: return "HessianNotProportional";
    case Incompatibility::AlphaNotPositive: return "AlphaNotPositive";
  }
  return "Unknown";
}

CompatibilityResult entropy_compatibility_check(const Functional& f, const Distribution& pi) {
  CompatibilityResult out;
  const Matrix hess = fd_hessian(f, pi).matrix();
  const Matrix reference = entropy_hessian_at_pi(pi).matrix();
  out.scale = std::max(1.0, hess.cwiseAbs().maxCoeff());

  const Covector grad = f.gradient ? f.gradient(pi) : fd_gradient(f, pi);
  out.gradient_sup = grad.cwiseAbs().maxCoeff();
  if (out.gradient_sup > kGradientTolerance * out.scale) {
    out.reason = Incompatibility::NonzeroGradient;
    return out;
  }

  // Least squares for alpha over the independent (upper-triangular) entries.
  double hn = 0.0;
  double nn = 0.0;
  double hh = 0.0;
  const Eigen::Index d = hess.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      hn += hess(i, j) * reference(i, j);
      nn += reference(i, j) * reference(i, j);
      hh += hess(i, j) * hess(i, j);
    }
  }
  out.alpha = hn / nn;
  double rr = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      const double r = hess(i, j) - out.alpha * reference(i, j);
      rr += r * r;
    }
  }
  out.hessian_residual = hh > 0.0 ? std::sqrt(rr / hh) : 0.0;

  if (out.hessian_residual > kProportionalTolerance) {
    out.reason = Incompatibility::HessianNotProportional;
  } else if (!(out.alpha > 0.0)) {
    out.reason = Incompatibility::AlphaNotPositive;
  } else {
    out.compatible = true;
  }
  return out;
}

}  // namespace gradflow
