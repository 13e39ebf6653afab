#pragma once

#include <functional>
#include <vector>

#include "gradflow/entropy.hpp"
#include "gradflow/markov_core.hpp"

namespace gradflow {

/// A Riemannian metric on the open simplex: a symmetric positive definite
/// form on T at each point. The evaluator must tolerate concurrent calls.
class MetricField {
 public:
  using Evaluator = std::function<BilinearFormOnT(const Distribution&)>;

  explicit MetricField(Evaluator at) : at_(std::move(at)) {}
  static MetricField constant(BilinearFormOnT g);

  BilinearFormOnT at(const Distribution& mu) const { return at_(mu); }

 private:
  Evaluator at_;
};

/// Coordinates below this during integration count as leaving the simplex.
inline constexpr double kSimplexFloor = 1e-12;

/// Fixed-step classical RK4 for g(rho', v) = -dF(v), integrated in tangent
/// coordinates so that every state carries unit mass. Throws LeftSimplex or
/// SingularMetric, with the offending time in the message.
Trajectory gradient_flow_integrate(const MetricField& g, const Functional& f, const Distribution& rho0,
                                   double t_end, double dt);

/// Sup over the integrator's sample times of the max-norm distance between
/// the gradient flow and mu exp(tQ).
double compare_flows(const Generator& q, const MetricField& g, const Functional& f,
                     const Distribution& rho0, double t_end, double dt);

/// Basis of T at mu whose first element is mu Q; the rest are Gram-Schmidt
/// completions drawn from the tangent basis. Throws AtEquilibrium when mu Q
/// vanishes.
std::vector<TangentVector> frame_field(const Generator& q, const Distribution& mu);

/// Smooth bump exp(1 - 1/(1 - r^2)), r = |mu - center|_2 / radius, zero for r >= 1.
double bump(const Distribution& mu, const Distribution& center, double radius);

/// Largest |a| for which a negative patch a at rho keeps the smallest
/// eigenvalue of the perturbed metric at or above half that of g.
double perturbation_budget(const MetricField& g, const Generator& q, const Distribution& rho);

/// The metric that agrees with g except in the ball of the given radius
/// around rho, where bump(mu) * a is added to the (e_2, e_2) entry of g in
/// the frame_field frame. The pairing with mu Q is untouched, so the gradient
/// flow of any functional is unchanged.
MetricField perturbed_metric(const MetricField& g, const Generator& q, const Distribution& rho,
                             double a, double radius);

}  // namespace gradflow
