#pragma once

#include <Eigen/Dense>

namespace gradflow {

/// Matrix exponential by scaling and squaring with the degree-13 Pade
/// approximant (Higham 2005). Valid for defective matrices.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

}  // namespace gradflow
