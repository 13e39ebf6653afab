#include "gradflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gradflow/errors.hpp"

namespace gradflow {

namespace {

using Complex = std::complex<double>;

// Unit max-modulus, first entry above 1e-12 made real and positive.
Eigen::RowVectorXcd normalise_eigenvector(Eigen::RowVectorXcd v) {
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return v;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) <= 1e-12 * peak) continue;
    if (v.imag().cwiseAbs().maxCoeff() == 0.0) {
      // Real vectors only need a sign, which keeps the scaling exact.
      if (v(k).real() < 0.0) v = -v;
    } else {
      v *= std::conj(v(k)) / std::abs(v(k));
      v(k) = Complex(v(k).real(), 0.0);
    }
    break;
  }
  return v / v.cwiseAbs().maxCoeff();
}

}  // namespace

SpectralDecomposition left_eigen(const Generator& q) {
  if (!is_irreducible(q)) throw Error(ErrorCode::NotIrreducible, "generator is not irreducible");

  const Eigen::Index n = q.n_states();
  // Left eigenvectors of Q are right eigenvectors of Q^T.
  const Eigen::EigenSolver<Matrix> solver(q.rates().transpose(), true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "eigensolver did not converge");
  }
  Eigen::VectorXcd values = solver.eigenvalues();
  const ComplexMatrix vectors = solver.eigenvectors().transpose();

  SpectralDecomposition out;
  out.imag_tolerance = kRealTolerance * q.max_abs();
  out.max_imag = values.imag().cwiseAbs().maxCoeff();
  out.real = out.max_imag <= out.imag_tolerance;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(values(k).imag()) <= out.imag_tolerance) values(k) = Complex(values(k).real(), 0.0);
  }

  Eigen::Index zero = 0;
  values.cwiseAbs().minCoeff(&zero);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if ((a == zero) != (b == zero)) return a == zero;
    if (values(a).real() != values(b).real()) return values(a).real() > values(b).real();
    return values(a).imag() > values(b).imag();
  });

  out.left_eigenvectors.resize(n, n);
  ComplexMatrix unit_rows(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index k = order[static_cast<std::size_t>(r)];
    out.eigenvalues.push_back(values(k));
    Eigen::RowVectorXcd v = vectors.row(k);
    unit_rows.row(r) = v / v.norm();
    if (r == 0) {
      v /= v.sum();
    } else {
      v = normalise_eigenvector(v);
    }
    out.left_eigenvectors.row(r) = v;
  }

  const Eigen::JacobiSVD<ComplexMatrix> svd(unit_rows);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  out.eigenvector_condition =
      smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
  out.diagonalisable = out.eigenvector_condition < kConditionLimit;
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Borderline: return "borderline";
  }
  return "unknown";
}

Verdict is_gradient_flow_representable(const SpectralDecomposition& spec) {
  const auto near = [](double value, double threshold) {
    return value > threshold / 10.0 && value < threshold * 10.0;
  };
  if (near(spec.max_imag, spec.imag_tolerance) ||
      near(spec.eigenvector_condition, kConditionLimit)) {
    return Verdict::Borderline;
  }
  return spec.real && spec.diagonalisable ? Verdict::Yes : Verdict::No;
}

Verdict is_gradient_flow_representable(const Generator& q) {
  return is_gradient_flow_representable(left_eigen(q));
}

std::vector<TangentVector> tangent_basis(Eigen::Index d) {
  if (d < 1) throw Error(ErrorCode::InvalidShape, "tangent basis needs d >= 1");
  std::vector<TangentVector> basis;
  basis.reserve(static_cast<std::size_t>(d));
  const Matrix b = tangent_basis_matrix(d);
  for (Eigen::Index i = 0; i < d; ++i) basis.push_back(TangentVector::from(b.row(i)));
  return basis;
}

Matrix tangent_basis_matrix(Eigen::Index d) {
  if (d < 1) throw Error(ErrorCode::InvalidShape, "tangent basis needs d >= 1");
  Matrix b = Matrix::Zero(d, d + 1);
  b.leftCols(d).setIdentity();
  b.col(d).setConstant(-1.0);
  return b;
}

}  // namespace gradflow
