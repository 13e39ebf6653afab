#include "gradflow/expm.hpp"

#include <cmath>

namespace gradflow {

namespace {

// Backward error bound for the [13/13] approximant in double precision.
constexpr double kTheta13 = 5.371920351148152;

constexpr double kPade13[] = {64764752532480000.0,
                              32382376266240000.0,
                              7771770303897600.0,
                              1187353796428800.0,
                              129060195264000.0,
                              10559470521600.0,
                              670442572800.0,
                              33522128640.0,
                              1323241920.0,
                              40840800.0,
                              960960.0,
                              16380.0,
                              182.0,
                              1.0};

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  if (n == 0) return id;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  }
  const Eigen::MatrixXd s = a / std::ldexp(1.0, squarings);

  const Eigen::MatrixXd s2 = s * s;
  const Eigen::MatrixXd s4 = s2 * s2;
  const Eigen::MatrixXd s6 = s4 * s2;
  const auto* b = kPade13;

  const Eigen::MatrixXd u_inner = s6 * (b[13] * s6 + b[11] * s4 + b[9] * s2);
  const Eigen::MatrixXd u =
      s * (u_inner + b[7] * s6 + b[5] * s4 + b[3] * s2 + b[1] * id);
  const Eigen::MatrixXd v =
      s6 * (b[12] * s6 + b[10] * s4 + b[8] * s2) + b[6] * s6 + b[4] * s4 + b[2] * s2 + b[0] * id;

  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

}  // namespace gradflow
