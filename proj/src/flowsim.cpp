#include "gradflow/flowsim.hpp"

#include <cmath>
#include <string>

#include "gradflow/errors.hpp"
#include "gradflow/spectral.hpp"

namespace gradflow {

namespace {

constexpr double kEquilibriumTolerance = 1e-12;
constexpr double kDegenerateCandidate = 1e-10;

std::string at_time(double t) { return " at t=" + std::to_string(t); }

Distribution from_coords(const RowVector& x, double t) {
  RowVector p(x.size() + 1);
  p.head(x.size()) = x;
  p(x.size()) = 1.0 - x.sum();
  if (!p.allFinite() || p.minCoeff() < kSimplexFloor) {
    throw Error(ErrorCode::LeftSimplex, "trajectory left the simplex" + at_time(t));
  }
  return Distribution::from(std::move(p));
}

// Tangent-coordinate velocity x with G x^T = -grad F.
RowVector velocity(const MetricField& g, const Functional& f, const Distribution& rho, double t) {
  const Covector grad = f.gradient ? f.gradient(rho) : fd_gradient(f, rho);
  const Matrix gm = g.at(rho).matrix();
  const Eigen::LLT<Matrix> llt(gm);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMetric, "metric is not invertible" + at_time(t));
  }
  return -llt.solve(grad.transpose()).transpose();
}

// Frame in ambient coordinates; candidates are tangent-basis indices. When
// `fixed` is given those candidates are used as-is, otherwise degenerate
// candidates are skipped and the chosen ones reported through `chosen`.
std::vector<RowVector> build_frame(const Generator& q, const Distribution& mu,
                                   const std::vector<Eigen::Index>* fixed,
                                   std::vector<Eigen::Index>* chosen) {
  if (mu.size() != q.n_states()) throw Error(ErrorCode::DimensionMismatch, "mu has wrong size");
  const RowVector e1 = mu.mass() * q.rates();
  if (e1.cwiseAbs().maxCoeff() <= kEquilibriumTolerance * q.max_abs()) {
    throw Error(ErrorCode::AtEquilibrium, "mu Q vanishes");
  }
  const Eigen::Index d = q.dim();
  const Matrix candidates = tangent_basis_matrix(d);

  std::vector<RowVector> frame{e1};
  std::vector<RowVector> orthonormal{e1 / e1.norm()};
  const auto try_candidate = [&](Eigen::Index k, bool allow_skip) {
    RowVector r = candidates.row(k);
    for (const auto& u : orthonormal) r -= r.dot(u) * u;
    const double norm = r.norm();
    if (allow_skip && norm < kDegenerateCandidate * candidates.row(k).norm()) return false;
    orthonormal.push_back(r / norm);
    frame.push_back(r / norm);
    return true;
  };

  if (fixed != nullptr) {
    for (Eigen::Index k : *fixed) try_candidate(k, false);
  } else {
    for (Eigen::Index k = 0; k < d && static_cast<Eigen::Index>(frame.size()) < d; ++k) {
      if (try_candidate(k, true) && chosen != nullptr) chosen->push_back(k);
    }
  }
  return frame;
}

Matrix frame_coords(const std::vector<RowVector>& frame) {
  const auto d = static_cast<Eigen::Index>(frame.size());
  Matrix e(d, d);
  for (Eigen::Index i = 0; i < d; ++i) e.row(i) = frame[static_cast<std::size_t>(i)].head(d);
  return e;
}

// Dual vector of e_2 in tangent coordinates: g~ - g = eta * a * c c^T.
Vector patch_direction(const Matrix& e) { return e.inverse().col(1); }

double min_eigenvalue(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

MetricField MetricField::constant(BilinearFormOnT g) {
  return MetricField([g = std::move(g)](const Distribution&) { return g; });
}

Trajectory gradient_flow_integrate(const MetricField& g, const Functional& f, const Distribution& rho0,
                                   double t_end, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::InvalidShape, "t_end and dt must be positive");
  const Eigen::Index d = rho0.size() - 1;
  const auto steps = static_cast<long>(std::floor(t_end / dt + 1e-9));

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps + 1));
  traj.states.reserve(static_cast<std::size_t>(steps + 1));
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);

  RowVector x = rho0.mass().head(d);
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const RowVector k1 = velocity(g, f, from_coords(x, t), t);
    const RowVector k2 = velocity(g, f, from_coords(x + 0.5 * dt * k1, t), t);
    const RowVector k3 = velocity(g, f, from_coords(x + 0.5 * dt * k2, t), t);
    const RowVector k4 = velocity(g, f, from_coords(x + dt * k3, t), t);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = static_cast<double>(k + 1) * dt;
    traj.times.push_back(t_next);
    traj.states.push_back(from_coords(x, t_next));
  }
  return traj;
}

double compare_flows(const Generator& q, const MetricField& g, const Functional& f,
                     const Distribution& rho0, double t_end, double dt) {
  const Trajectory flow = gradient_flow_integrate(g, f, rho0, t_end, dt);
  double worst = 0.0;
  for (std::size_t k = 0; k < flow.size(); ++k) {
    const Distribution exact = semigroup_evolve(q, rho0, flow.times[k]);
    worst = std::max(worst, (flow.states[k].mass() - exact.mass()).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<TangentVector> frame_field(const Generator& q, const Distribution& mu) {
  std::vector<TangentVector> out;
  for (auto& v : build_frame(q, mu, nullptr, nullptr)) out.push_back(TangentVector::from(std::move(v)));
  return out;
}

double bump(const Distribution& mu, const Distribution& center, double radius) {
  if (mu.size() != center.size()) throw Error(ErrorCode::DimensionMismatch, "mu and center differ in size");
  const double r = (mu.mass() - center.mass()).norm() / radius;
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

double perturbation_budget(const MetricField& g, const Generator& q, const Distribution& rho) {
  if (q.dim() < 2) throw Error(ErrorCode::DimensionTooSmall, "perturbation needs d >= 2");
  const Matrix gm = g.at(rho).matrix();
  const Vector c = patch_direction(frame_coords(build_frame(q, rho, nullptr, nullptr)));
  const double floor = 0.5 * min_eigenvalue(gm);
  const double c2 = c.squaredNorm();

  // Weyl: lambda_min(G + a c c^T) >= lambda_min(G) + a |c|^2 for a < 0.
  double safe = floor / c2;
  // Rayleigh quotient along c bounds the budget from above.
  double unsafe = (c.dot(gm * c) / c2 - floor) / c2;
  for (int it = 0; it < 100 && unsafe - safe > 1e-14 * unsafe; ++it) {
    const double mid = 0.5 * (safe + unsafe);
    if (min_eigenvalue(gm - mid * c * c.transpose()) >= floor) {
      safe = mid;
    } else {
      unsafe = mid;
    }
  }
  return safe;
}

MetricField perturbed_metric(const MetricField& g, const Generator& q, const Distribution& rho,
                             double a, double radius) {
  const Eigen::Index d = q.dim();
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "perturbation needs d >= 2");
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidShape, "radius must be positive");

  const Distribution pi = stationary_distribution(q);
  if ((rho.mass() - pi.mass()).norm() <= radius) {
    throw Error(ErrorCode::SupportTouchesEquilibrium, "support ball contains the stationary distribution");
  }
  // Distance from rho to the face {mu_i = 0} inside the affine hull of the simplex.
  const double n = static_cast<double>(d + 1);
  if (rho.mass().minCoeff() / std::sqrt(1.0 - 1.0 / n) <= radius) {
    throw Error(ErrorCode::SupportLeavesSimplex, "support ball reaches the simplex boundary");
  }

  std::vector<Eigen::Index> candidates;
  const Matrix e_rho = frame_coords(build_frame(q, rho, nullptr, &candidates));
  const Matrix g_rho = g.at(rho).matrix();
  const Vector c_rho = patch_direction(e_rho);
  const Matrix patched = g_rho + a * c_rho * c_rho.transpose();
  if (min_eigenvalue(patched) < 0.5 * min_eigenvalue(g_rho)) {
    throw Error(ErrorCode::PerturbationTooLarge, "patch a=" + std::to_string(a) +
                                                     " halves the smallest metric eigenvalue");
  }

  return MetricField([g, q, rho, a, radius, candidates](const Distribution& mu) {
    const BilinearFormOnT base = g.at(mu);
    const double eta = bump(mu, rho, radius);
    if (eta == 0.0 || a == 0.0) return base;
    // Same candidates everywhere in the ball keeps e_2 smooth in mu.
    const Vector c = patch_direction(frame_coords(build_frame(q, mu, &candidates, nullptr)));
    Matrix m = base.matrix() + (eta * a) * c * c.transpose();
    return BilinearFormOnT::from(0.5 * (m + m.transpose()));
  });
}

}  // namespace gradflow
