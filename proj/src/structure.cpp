#include "gradflow/structure.hpp"

#include <cmath>
#include <string>

#include "gradflow/errors.hpp"
#include "gradflow/spectral.hpp"

namespace gradflow {

namespace {

constexpr double kAsymmetryTolerance = 1e-8;
constexpr double kDefiniteTolerance = 1e-10;
constexpr double kEigenResidual = 1e-8;

}  // namespace

Matrix restrict_to_tangent(const Generator& q) {
  const Eigen::Index d = q.dim();
  const Matrix& r = q.rates();
  // b_i Q = row_i(Q) - row_d(Q); its coordinates are the first d entries.
  return r.topLeftCorner(d, d).rowwise() - r.row(d).head(d);
}

std::string_view to_string(MetricStatus status) {
  switch (status) {
    case MetricStatus::Metric: return "metric";
    case MetricStatus::Asymmetric: return "asymmetric";
    case MetricStatus::NotPositiveDefinite: return "not_positive_definite";
  }
  return "unknown";
}

BilinearFormOnT MetricAtPi::form() const {
  if (!is_metric()) {
    throw Error(ErrorCode::SingularMetric, std::string("g|pi is ") + std::string(to_string(status)));
  }
  return BilinearFormOnT::from(0.5 * (g + g.transpose()));
}

MetricAtPi metric_at_pi(const Generator& q, const BilinearFormOnT& m) {
  if (m.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "M does not act on T of Q");
  const Matrix q_bar = restrict_to_tangent(q);
  const Eigen::FullPivLU<Matrix> lu(q_bar);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::SingularQbar, "Q restricted to T is singular");
  }

  MetricAtPi out;
  out.g = -lu.solve(m.matrix());
  const double scale = out.g.cwiseAbs().maxCoeff();
  out.asymmetry = scale > 0.0 ? (out.g - out.g.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (out.g + out.g.transpose()),
                                                  Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();

  if (out.asymmetry > kAsymmetryTolerance) {
    out.status = MetricStatus::Asymmetric;
  } else if (out.min_eigenvalue <= kDefiniteTolerance * norm) {
    out.status = MetricStatus::NotPositiveDefinite;
  }
  return out;
}

RecoveredGenerator recover_generator(const BilinearFormOnT& g_pi, const BilinearFormOnT& m,
                                     const Distribution& pi) {
  const Eigen::Index d = g_pi.dim();
  if (m.dim() != d || pi.size() != d + 1) {
    throw Error(ErrorCode::DimensionMismatch, "g, M and pi disagree in dimension");
  }
  const Eigen::FullPivLU<Matrix> g_lu(g_pi.matrix());
  if (!g_lu.isInvertible()) throw Error(ErrorCode::SingularMetric, "g|pi is singular");

  RecoveredGenerator out;
  // Qbar G = -Mbar  =>  Qbar^T = -G^{-T} Mbar^T, with G and Mbar symmetric.
  out.tangent_action = -g_lu.solve(m.matrix()).transpose();

  // Rows b_0..b_{d-1}, pi form a basis of R^{d+1}: P Q = [Qbar B; 0].
  const Matrix basis = tangent_basis_matrix(d);
  Matrix p(d + 1, d + 1);
  p.topRows(d) = basis;
  p.row(d) = pi.mass();
  Matrix rhs = Matrix::Zero(d + 1, d + 1);
  rhs.topRows(d) = out.tangent_action * basis;
  out.ambient = p.fullPivLu().solve(rhs);
  return out;
}

OrthonormalRepresentation orthonormal_representation(const Generator& q, const BilinearFormOnT& g,
                                                     const BilinearFormOnT& m) {
  const Eigen::LLT<Matrix> llt(g.matrix());
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMetric, "g is not positive definite");
  const Eigen::Index d = g.dim();
  const Matrix lower = llt.matrixL();
  OrthonormalRepresentation out;
  // F = L^{-1} gives F G F^T = I.
  out.frame = lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(d, d));
  out.q_bar = out.frame * restrict_to_tangent(q) * lower;
  out.m_bar = out.frame * m.matrix() * out.frame.transpose();
  return out;
}

GradientStructure::GradientStructure(Distribution pi, std::vector<TangentVector> basis,
                                     std::vector<double> values)
    : pi_(std::move(pi)),
      eigenbasis_(std::move(basis)),
      eigenvalues_(std::move(values)),
      metric_(BilinearFormOnT::from(Matrix::Identity(1, 1))) {
  const auto d = static_cast<Eigen::Index>(eigenbasis_.size());
  Matrix frame(d, d);
  for (Eigen::Index i = 0; i < d; ++i) frame.row(i) = eigenbasis_[static_cast<std::size_t>(i)].coords();
  frame_inv_ = frame.inverse();
  // g(f_i, f_j) = delta_ij  =>  G = F^{-1} F^{-T} in tangent coordinates.
  const Matrix g = frame_inv_ * frame_inv_.transpose();
  metric_ = BilinearFormOnT::from(0.5 * (g + g.transpose()));
}

RowVector GradientStructure::coordinates(const Distribution& mu) const {
  if (mu.size() != pi_.size()) throw Error(ErrorCode::DimensionMismatch, "mu has wrong size");
  const Eigen::Index d = pi_.size() - 1;
  const RowVector x = (mu.mass() - pi_.mass()).head(d);
  return x * frame_inv_;
}

double GradientStructure::functional_value(const Distribution& mu) const {
  const RowVector a = coordinates(mu);
  double value = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    value += 0.5 * (-eigenvalues_[static_cast<std::size_t>(i)]) * a(i) * a(i);
  }
  return value;
}

Covector GradientStructure::functional_gradient(const Distribution& mu) const {
  const RowVector a = coordinates(mu);
  RowVector along_frame(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    along_frame(i) = -eigenvalues_[static_cast<std::size_t>(i)] * a(i);
  }
  // b_k = sum_j (F^{-1})_kj f_j
  return (frame_inv_ * along_frame.transpose()).transpose();
}

Functional GradientStructure::functional() const {
  Functional f;
  f.evaluate = [self = *this](const Distribution& mu) { return self.functional_value(mu); };
  f.gradient = [self = *this](const Distribution& mu) { return self.functional_gradient(mu); };
  return f;
}

GradientStructure canonical_structure(const Generator& q) {
  const SpectralDecomposition spec = left_eigen(q);
  const Verdict verdict = is_gradient_flow_representable(spec);
  if (verdict != Verdict::Yes) {
    throw Error(ErrorCode::NotRepresentable,
                "generator is not real diagonalisable (verdict " + std::string(to_string(verdict)) + ")");
  }
  const Eigen::Index d = q.dim();
  Distribution pi = stationary_distribution(q);

  std::vector<TangentVector> basis;
  std::vector<double> values;
  for (Eigen::Index i = 1; i <= d; ++i) {
    const double lambda = spec.eigenvalues[static_cast<std::size_t>(i)].real();
    RowVector f = spec.left_eigenvectors.row(i).real();
    // Eigenvectors for nonzero eigenvalues are zero-sum; drop solver round-off.
    f.array() -= f.mean();
    const double residual = (f * q.rates() - lambda * f).cwiseAbs().maxCoeff();
    if (!(lambda < 0.0) || residual > kEigenResidual * q.max_abs() * f.cwiseAbs().maxCoeff()) {
      throw Error(ErrorCode::NotRepresentable,
                  "eigenpair " + std::to_string(i) + " failed verification (residual " +
                      std::to_string(residual) + ")");
    }
    basis.push_back(TangentVector::from(std::move(f)));
    values.push_back(lambda);
  }
  return GradientStructure(std::move(pi), std::move(basis), std::move(values));
}

DetailedBalance check_detailed_balance(const Generator& q, double rel_tol) {
  const Distribution pi = stationary_distribution(q);
  const Matrix flux = pi.mass().asDiagonal() * q.rates();
  DetailedBalance out;
  out.asymmetry = (flux - flux.transpose()).cwiseAbs().maxCoeff();
  out.scale = flux.cwiseAbs().maxCoeff();
  out.reversible = out.asymmetry <= rel_tol * out.scale;
  return out;
}

Matrix reversibility_witness(const Generator& q) {
  const DetailedBalance balance = check_detailed_balance(q);
  if (!balance.reversible) {
    throw Error(ErrorCode::NotReversible,
                "detailed balance fails (asymmetry " + std::to_string(balance.asymmetry) + ")");
  }
  const Distribution pi = stationary_distribution(q);
  return -(pi.mass().asDiagonal() * q.rates());
}

}  // namespace gradflow
