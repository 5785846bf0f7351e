#include "opinf/inference.hpp"

#include "opinf/errors.hpp"
#include "opinf/quadform.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace opinf::inference {

namespace {

constexpr double kRankCutoff = 1e-12;

Matrix min_norm_solve(const Matrix& lhs, const Matrix& rhs) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankCutoff);
  cod.compute(lhs);
  return cod.solve(rhs);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::plain:
      return "plain";
    case Method::tikhonov:
      return "tikhonov";
    case Method::pir:
      return "pir";
    case Method::spir:
      return "spir";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  if (name == "plain") return Method::plain;
  if (name == "tikhonov") return Method::tikhonov;
  if (name == "pir") return Method::pir;
  if (name == "spir") return Method::spir;
  throw ArgumentError("opinf", "unknown inference method '" + std::string(name) + "'");
}

Matrix forward_diff(const Eigen::Ref<const Matrix>& states, double dt) {
  if (!(dt > 0.0)) {
    throw ArgumentError("opinf", "time step must be positive");
  }
  if (states.cols() < 2) {
    throw ArgumentError("opinf", "forward differences need at least two states");
  }
  const Index K = states.cols() - 1;
  return (states.rightCols(K) - states.leftCols(K)) / dt;
}

RegressionData assemble(const std::vector<Matrix>& projected_states, const std::vector<Matrix>& inputs,
                        double dt, bool constant) {
  if (projected_states.empty() || projected_states.size() != inputs.size()) {
    throw ArgumentError("opinf", "need one input trajectory per state trajectory");
  }
  RegressionData data;
  data.n = projected_states.front().rows();
  data.p = inputs.front().rows();
  data.constant = constant;
  Index rows = 0;
  for (std::size_t i = 0; i < projected_states.size(); ++i) {
    const auto& X = projected_states[i];
    const auto& U = inputs[i];
    if (X.rows() != data.n || U.rows() != data.p) {
      throw ArgumentError("opinf", "trajectories differ in state or input dimension");
    }
    if (U.cols() != X.cols() - 1) {
      throw ArgumentError("opinf", "input trajectory must have one column per time step");
    }
    if (!X.allFinite()) {
      throw ArgumentError("opinf", "training trajectory contains non-finite entries");
    }
    rows += U.cols();
  }
  data.D.resize(rows, data.cols());
  data.R.resize(rows, data.n);
  Index r = 0;
  for (std::size_t i = 0; i < projected_states.size(); ++i) {
    const auto& X = projected_states[i];
    const auto& U = inputs[i];
    const Index K = U.cols();
    if (K == 0) {
      continue;
    }
    const auto prev = X.leftCols(K);
    data.D.block(r, 0, K, data.n) = prev.transpose();
    if (data.p > 0) {
      data.D.block(r, data.input_offset(), K, data.p) = U.transpose();
    }
    data.D.block(r, data.quad_offset(), K, data.quad_cols()) = quadform::compress_square_columns(prev).transpose();
    if (constant) {
      data.D.block(r, data.constant_offset(), K, 1).setOnes();
    }
    data.R.middleRows(r, K) = forward_diff(X, dt).transpose();
    r += K;
  }
  return data;
}

Matrix stack_operators(const QuadraticModel& model, bool constant) {
  const Index n = model.dim();
  const Index p = model.input_dim();
  const Index s = quadform::compressed_size(n);
  Matrix O(n, n + p + s + (constant ? 1 : 0));
  O.leftCols(n) = model.A;
  O.middleCols(n, p) = model.B;
  O.middleCols(n + p, s) = model.F;
  if (constant) {
    O.rightCols(1) = model.c;
  }
  return O;
}

QuadraticModel unstack_operators(const Eigen::Ref<const Matrix>& O, Index n, Index p, bool constant) {
  const Index s = quadform::compressed_size(n);
  if (O.rows() != n || O.cols() != n + p + s + (constant ? 1 : 0)) {
    throw ArgumentError("opinf", "stacked operator has the wrong shape");
  }
  std::optional<Vector> c;
  if (constant) {
    c = O.rightCols(1);
  }
  return {O.leftCols(n), O.middleCols(n, p), O.middleCols(n + p, s), std::move(c)};
}

double data_misfit(const RegressionData& data, const Eigen::Ref<const Matrix>& O) {
  return (data.D * O.transpose() - data.R).squaredNorm();
}

LeastSquaresProblem::LeastSquaresProblem(const RegressionData& data)
    : n_(data.n), p_(data.p), constant_(data.constant) {
  if (data.D.rows() != data.R.rows() || data.D.cols() != data.cols() || data.R.cols() != data.n) {
    throw ArgumentError("opinf", "regression data shapes are inconsistent");
  }
  const Index m = data.D.cols();
  if (data.D.rows() > m) {
    Eigen::HouseholderQR<Matrix> qr(data.D);
    reduced_D_ = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    Matrix qtr = qr.householderQ().adjoint() * data.R;
    reduced_R_ = qtr.topRows(m);
    residual_floor_ = qtr.bottomRows(qtr.rows() - m).squaredNorm();
  } else {
    reduced_D_ = data.D;
    reduced_R_ = data.R;
    residual_floor_ = 0.0;
  }
}

Vector LeastSquaresProblem::penalty_weights(Method method) const {
  const Index s = quadform::compressed_size(n_);
  const Index m = n_ + p_ + s + (constant_ ? 1 : 0);
  Vector w = Vector::Zero(m);
  switch (method) {
    case Method::plain:
      break;
    case Method::tikhonov:
      w.setOnes();
      break;
    case Method::pir:
    case Method::spir:
      w.segment(n_ + p_, s).setOnes();
      break;
  }
  return w;
}

double LeastSquaresProblem::objective(const Eigen::Ref<const Matrix>& O, Method method, double lambda) const {
  const double misfit = (reduced_D_ * O.transpose() - reduced_R_).squaredNorm() + residual_floor_;
  if (method == Method::plain || lambda == 0.0) {
    return misfit;
  }
  const Vector w = penalty_weights(method);
  return misfit + lambda * (O * w.asDiagonal()).squaredNorm();
}

Matrix LeastSquaresProblem::ridge_solve(const Vector& weights, double lambda) const {
  const Index m = reduced_D_.cols();
  const Index active = (weights.array() > 0.0).count();
  if (lambda == 0.0 || active == 0) {
    return min_norm_solve(reduced_D_, reduced_R_).transpose();
  }
  Matrix lhs = Matrix::Zero(reduced_D_.rows() + active, m);
  Matrix rhs = Matrix::Zero(reduced_D_.rows() + active, n_);
  lhs.topRows(reduced_D_.rows()) = reduced_D_;
  rhs.topRows(reduced_D_.rows()) = reduced_R_;
  const double root = std::sqrt(lambda);
  Index r = reduced_D_.rows();
  for (Index j = 0; j < m; ++j) {
    if (weights[j] > 0.0) {
      lhs(r++, j) = root * std::sqrt(weights[j]);
    }
  }
  return min_norm_solve(lhs, rhs).transpose();
}

FitReport LeastSquaresProblem::finish(Matrix O, Method method, double lambda) const {
  FitReport report;
  report.residual = objective(O, method, lambda);
  report.model = unstack_operators(O, n_, p_, constant_);
  return report;
}

FitReport LeastSquaresProblem::fit_plain() const {
  return finish(ridge_solve(penalty_weights(Method::plain), 0.0), Method::plain, 0.0);
}

FitReport LeastSquaresProblem::fit_tikhonov(double lambda) const {
  if (!(lambda >= 0.0)) {
    throw ArgumentError("opinf", "regularization parameter must be nonnegative");
  }
  return finish(ridge_solve(penalty_weights(Method::tikhonov), lambda), Method::tikhonov, lambda);
}

FitReport LeastSquaresProblem::fit_pir(double lambda) const {
  if (!(lambda >= 0.0)) {
    throw ArgumentError("opinf", "regularization parameter must be nonnegative");
  }
  return finish(ridge_solve(penalty_weights(Method::pir), lambda), Method::pir, lambda);
}

Matrix project_negative_definite(const Eigen::Ref<const Matrix>& A, double epsilon) {
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw NumericError("opinf", "symmetric eigendecomposition failed");
  }
  const Vector clipped = eig.eigenvalues().cwiseMin(-epsilon);
  const Matrix& Q = eig.eigenvectors();
  Matrix out = Q * clipped.asDiagonal() * Q.transpose();
  return 0.5 * (out + out.transpose());
}

// The A-block is the only constrained block. For a fixed symmetric A the
// optimal remaining operators Z = [B | F | c] solve a ridge problem that is
// linear in A, so Z is eliminated exactly and the accelerated projected
// gradient runs on the n x n symmetric variable alone.
FitReport LeastSquaresProblem::fit_spir(double lambda, double epsilon, const SpirOptions& options) const {
  if (!(lambda >= 0.0)) {
    throw ArgumentError("opinf", "regularization parameter must be nonnegative");
  }
  if (!(epsilon > 0.0)) {
    throw ArgumentError("opinf", "definiteness margin must be positive");
  }
  const Index n = n_;
  const Index m = reduced_D_.cols();
  const Index q = m - n;
  const Index rows = reduced_D_.rows();
  const Vector w = penalty_weights(Method::spir).tail(q);
  const Index active = lambda > 0.0 ? (w.array() > 0.0).count() : 0;

  // Stacked unconstrained system G Z^T ~ [T - M_A S; 0].
  Matrix G = Matrix::Zero(rows + active, q);
  G.topRows(rows) = reduced_D_.rightCols(q);
  Index r = rows;
  for (Index j = 0; j < q && active > 0; ++j) {
    if (w[j] > 0.0) {
      G(r++, j) = std::sqrt(lambda);
    }
  }
  Matrix MA = Matrix::Zero(rows + active, n);
  MA.topRows(rows) = reduced_D_.leftCols(n);
  Matrix T = Matrix::Zero(rows + active, n);
  T.topRows(rows) = reduced_R_;

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankCutoff);
  if (q > 0) {
    cod.compute(G);
  }
  auto residual_of = [&](const Matrix& target) -> Matrix {
    if (q == 0) {
      return target;
    }
    return target - G * cod.solve(target);
  };
  const Matrix Mp = residual_of(MA);
  const Matrix Tp = residual_of(T);
  const Matrix gram = Mp.transpose() * Mp;
  const Matrix cross = Mp.transpose() * Tp;

  Eigen::SelfAdjointEigenSolver<Matrix> gram_eig(0.5 * (gram + gram.transpose()), Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * std::max(gram_eig.eigenvalues().maxCoeff(), 0.0);

  auto gradient = [&](const Matrix& S) -> Matrix {
    Matrix g = 2.0 * (gram * S - cross);
    return 0.5 * (g + g.transpose());
  };
  auto reduced_objective = [&](const Matrix& S) { return (Mp * S - Tp).squaredNorm(); };

  FitReport report;
  Matrix S;
  if (lipschitz == 0.0) {
    S = -epsilon * Matrix::Identity(n, n);
    report.iterations = 0;
    report.converged = true;
  } else {
    // Warm start at the projected unconstrained minimizer.
    const Matrix unconstrained = min_norm_solve(Mp, Tp);
    S = project_negative_definite(unconstrained, epsilon);
    Matrix Y = S;
    double t = 1.0;
    const double step = 1.0 / lipschitz;
    double current = reduced_objective(S);
    report.converged = false;
    Index it = 0;
    while (it < options.max_iterations) {
      ++it;
      Matrix next = project_negative_definite(Y - step * gradient(Y), epsilon);
      double next_value = reduced_objective(next);
      double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      if (next_value > current) {
        // Function-value restart of the momentum sequence.
        next = project_negative_definite(S - step * gradient(S), epsilon);
        next_value = reduced_objective(next);
        t_next = 1.0;
      }
      Y = next + ((t - 1.0) / t_next) * (next - S);
      if (t_next == 1.0) {
        Y = next;
      }
      S = std::move(next);
      current = next_value;
      t = t_next;

      // Optimality: length of the plain projected-gradient step at S.
      const Matrix probe = project_negative_definite(S - step * gradient(S), epsilon);
      if ((probe - S).norm() < options.tolerance * std::max(1.0, S.norm())) {
        report.converged = true;
        break;
      }
    }
    report.iterations = it;
  }
  S = (0.5 * (S + S.transpose())).eval();

  Matrix O(n, m);
  O.leftCols(n) = S;
  if (q > 0) {
    O.rightCols(q) = cod.solve(T - MA * S).transpose();
  }
  report.residual = objective(O, Method::spir, lambda);
  report.model = unstack_operators(O, n_, p_, constant_);
  return report;
}

FitReport LeastSquaresProblem::fit(Method method, double lambda, double epsilon, const SpirOptions& options) const {
  switch (method) {
    case Method::plain:
      return fit_plain();
    case Method::tikhonov:
      return fit_tikhonov(lambda);
    case Method::pir:
      return fit_pir(lambda);
    case Method::spir:
      return fit_spir(lambda, epsilon, options);
  }
  throw ArgumentError("opinf", "unknown inference method");
}

FitReport fit_plain(const RegressionData& data) { return LeastSquaresProblem(data).fit_plain(); }
FitReport fit_tikhonov(const RegressionData& data, double lambda) {
  return LeastSquaresProblem(data).fit_tikhonov(lambda);
}
FitReport fit_pir(const RegressionData& data, double lambda) { return LeastSquaresProblem(data).fit_pir(lambda); }
FitReport fit_spir(const RegressionData& data, double lambda, double epsilon, const SpirOptions& options) {
  return LeastSquaresProblem(data).fit_spir(lambda, epsilon, options);
}

}  // namespace opinf::inference
