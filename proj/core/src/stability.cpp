#include "opinf/stability.hpp"

#include "opinf/errors.hpp"
#include "opinf/quadform.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <complex>

namespace opinf::stability {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

ComplexVector eigenvalues_of(const Eigen::Ref<const Matrix>& A) {
  Eigen::EigenSolver<Matrix> es(A, false);
  if (es.info() != Eigen::Success) {
    throw NumericError("stability", "eigenvalue computation did not converge");
  }
  return es.eigenvalues();
}

}  // namespace

bool is_hurwitz(const Eigen::Ref<const Matrix>& A) {
  if (A.rows() != A.cols()) {
    throw ArgumentError("stability", "matrix must be square");
  }
  if (A.size() == 0) {
    return true;
  }
  if (!A.allFinite()) {
    return false;
  }
  const ComplexVector ev = eigenvalues_of(A);
  return (ev.real().array() < 0.0).all();
}

Matrix solve_lyapunov(const Eigen::Ref<const Matrix>& A, const Eigen::Ref<const Matrix>& Q) {
  const Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw ArgumentError("stability", "Lyapunov operands must be square and conforming");
  }
  if (!is_hurwitz(A)) {
    throw StabilityError("stability", "Lyapunov equation requires a Hurwitz matrix");
  }
  const Matrix At = A.transpose();
  const Matrix I = Matrix::Identity(n, n);
  // Column-major vec: vec(At P) = (I (x) At) vec(P), vec(P A) = (A^T (x) I) vec(P).
  Matrix K = Matrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) += I(i, j) * At;
      K.block(i * n, j * n, n, n) += At(i, j) * I;
    }
  }
  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) {
    throw NumericError("stability", "vectorized Lyapunov system is singular");
  }
  const Vector rhs = -Eigen::Map<const Vector>(Matrix(Q).data(), n * n);
  const Vector sol = lu.solve(rhs);
  Matrix P = Eigen::Map<const Matrix>(sol.data(), n, n);
  P = (0.5 * (P + P.transpose())).eval();
  const double residual = (At * P + P * A + Q).norm();
  if (residual > 1e-10 * std::max(Q.norm(), 1e-300)) {
    throw NumericError("stability", "Lyapunov residual above tolerance");
  }
  return P;
}

StabilityReport stability_radius(const QuadraticModel& model) {
  StabilityReport report;
  report.sigma_min_L = 1.0;
  if (!is_hurwitz(model.A)) {
    report.hurwitz = false;
    return report;
  }
  report.hurwitz = true;
  const Index n = model.dim();
  report.P = solve_lyapunov(model.A, Matrix::Identity(n, n));
  // ||H||_F equals ||F||_F for the zero-filled expansion.
  const double h_norm = quadform::expand_quadratic(model.F).norm();
  if (h_norm == 0.0) {
    report.rho = Radius::unbounded();
  } else {
    report.rho = Radius(report.sigma_min_L / (2.0 * std::sqrt(report.P.norm()) * h_norm));
  }
  return report;
}

Matrix reflect_eigenvalues(const Eigen::Ref<const Matrix>& A, double epsilon) {
  const Index n = A.rows();
  if (A.cols() != n) {
    throw ArgumentError("stability", "matrix must be square");
  }
  if (!(epsilon > 0.0)) {
    throw ArgumentError("stability", "reflection threshold must be positive");
  }
  if (!A.allFinite()) {
    throw NumericError("stability", "matrix contains non-finite entries");
  }
  Matrix current = A;
  // A single reconstruction can leave an eigenvalue of size epsilon on the
  // wrong side through round-off; reflect the result again in that case.
  for (int pass = 0; pass < 4; ++pass) {
    Eigen::EigenSolver<Matrix> es(current, true);
    if (es.info() != Eigen::Success) {
      throw NumericError("stability", "eigenvalue computation did not converge");
    }
    ComplexVector ev = es.eigenvalues();
    if ((ev.real().array() < 0.0).all()) {
      return current;
    }
    const ComplexMatrix Qm = es.eigenvectors();
    Eigen::JacobiSVD<ComplexMatrix> svd(Qm);
    const auto& sv = svd.singularValues();
    const double cond = sv[n - 1] > 0.0 ? sv[0] / sv[n - 1] : std::numeric_limits<double>::infinity();
    if (!(cond <= kDiagonalizableCondition)) {
      throw DiagonalizabilityError("stability", "eigenvector matrix is ill-conditioned; reduce the model dimension");
    }
    for (Index i = 0; i < n; ++i) {
      if (ev[i].real() >= 0.0) {
        ev[i] = {-epsilon, ev[i].imag()};
      }
    }
    const ComplexMatrix rebuilt = Qm * ev.asDiagonal() * Qm.partialPivLu().inverse();
    current = rebuilt.real();
  }
  if (!is_hurwitz(current)) {
    throw NumericError("stability", "eigenvalue reflection failed to produce a Hurwitz matrix");
  }
  return current;
}

}  // namespace opinf::stability
