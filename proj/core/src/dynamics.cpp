#include "opinf/dynamics.hpp"

#include "opinf/errors.hpp"
#include "opinf/quadform.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <limits>

namespace opinf {

QuadraticModel::QuadraticModel(Matrix A_, Matrix B_, Matrix F_, std::optional<Vector> c_)
    : A(std::move(A_)), B(std::move(B_)), F(std::move(F_)) {
  c = c_ ? std::move(*c_) : Vector::Zero(A.rows());
}

void QuadraticModel::validate() const {
  const Index n = A.rows();
  if (A.cols() != n) {
    throw ArgumentError("dynamics", "A must be square");
  }
  if (B.rows() != n) {
    throw ArgumentError("dynamics", "B must have n rows");
  }
  if (F.rows() != n || F.cols() != quadform::compressed_size(n)) {
    throw ArgumentError("dynamics", "F must be n x n(n+1)/2");
  }
  if (c.size() != n) {
    throw ArgumentError("dynamics", "c must have length n");
  }
  if (!A.allFinite() || !B.allFinite() || !F.allFinite() || !c.allFinite()) {
    throw ArgumentError("dynamics", "model operators contain non-finite entries");
  }
}

Vector QuadraticModel::rhs(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& u) const {
  Vector f = A * x + F * quadform::compress_square(x) + c;
  if (B.cols() > 0) {
    f.noalias() += B * u;
  }
  return f;
}

namespace dynamics {

Vector euler_step(const QuadraticModel& model, const Eigen::Ref<const Vector>& x,
                  const Eigen::Ref<const Vector>& u, double dt) {
  return x + dt * model.rhs(x, u);
}

namespace {

bool blown_up(const Vector& x) {
  for (Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || std::abs(x[i]) > kBlowUpThreshold) {
      return true;
    }
  }
  return false;
}

// Full-order operators from finite-difference stencils are mostly zero; a
// sparse copy of F turns the dominant O(n^3) product into O(nnz).
template <typename QuadOp>
void integrate(const QuadraticModel& model, const QuadOp& quad, Trajectory& traj) {
  const Index n = model.dim();
  const Index K = traj.inputs.cols();
  const bool has_input = model.input_dim() > 0;
  Vector x = traj.states.col(0);
  Vector x2(quadform::compressed_size(n));
  Vector f(n);
  for (Index k = 0; k < K; ++k) {
    Index idx = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j <= i; ++j) {
        x2[idx++] = x[i] * x[j];
      }
    }
    f.noalias() = model.A * x;
    f.noalias() += quad * x2;
    if (has_input) {
      f.noalias() += model.B * traj.inputs.col(k);
    }
    f += model.c;
    x += traj.dt * f;
    if (blown_up(x)) {
      traj.states.rightCols(K - k).setConstant(std::numeric_limits<double>::quiet_NaN());
      traj.diverged = true;
      return;
    }
    traj.states.col(k + 1) = x;
  }
}

}  // namespace

Trajectory simulate(const QuadraticModel& model, const Eigen::Ref<const Vector>& x0,
                    const Eigen::Ref<const Matrix>& inputs, double dt) {
  model.validate();
  const Index n = model.dim();
  if (x0.size() != n) {
    throw ArgumentError("dynamics", "initial condition length differs from model dimension");
  }
  if (inputs.rows() != model.input_dim()) {
    throw ArgumentError("dynamics", "input rows differ from model input dimension");
  }
  if (!(dt > 0.0)) {
    throw ArgumentError("dynamics", "time step must be positive");
  }
  Trajectory traj;
  traj.dt = dt;
  traj.inputs = inputs;
  traj.states.resize(n, inputs.cols() + 1);
  traj.states.col(0) = x0;
  if (blown_up(traj.states.col(0))) {
    traj.states.setConstant(std::numeric_limits<double>::quiet_NaN());
    traj.diverged = true;
    return traj;
  }

  const Index nnz = (model.F.array() != 0.0).count();
  if (n >= 16 && nnz * 4 < model.F.size()) {
    const Eigen::SparseMatrix<double> sparse_F = model.F.sparseView();
    integrate(model, sparse_F, traj);
  } else {
    integrate(model, model.F, traj);
  }
  return traj;
}

}  // namespace dynamics
}  // namespace opinf
