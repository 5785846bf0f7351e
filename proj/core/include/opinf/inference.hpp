#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/types.hpp"

#include <string_view>
#include <vector>

namespace opinf::inference {

enum class Method { plain, tikhonov, pir, spir };

std::string_view to_string(Method m);
/// Throws ArgumentError on unknown names.
Method method_from_string(std::string_view name);

/// Least-squares data. D has one row per sample with column blocks
/// [xbar^T | u^T | (xbar^2)^T | 1 (if constant)]; R holds the matching
/// derivative targets, one row per sample.
struct RegressionData {
  Matrix D;
  Matrix R;
  Index n = 0;
  Index p = 0;
  bool constant = false;

  [[nodiscard]] Index quad_cols() const { return n * (n + 1) / 2; }
  [[nodiscard]] Index input_offset() const { return n; }
  [[nodiscard]] Index quad_offset() const { return n + p; }
  [[nodiscard]] Index constant_offset() const { return n + p + quad_cols(); }
  [[nodiscard]] Index cols() const { return n + p + quad_cols() + (constant ? 1 : 0); }
  [[nodiscard]] Index samples() const { return D.rows(); }
};

struct FitReport {
  QuadraticModel model;
  double residual = 0.0;  ///< objective value J + penalty at the returned operators
  Index iterations = 0;
  bool converged = true;
};

struct SpirOptions {
  double tolerance = 1e-10;  ///< on the projected-gradient step norm, relative to max(1, ||A||_F)
  Index max_iterations = 200000;
};

/// Forward differences (x_k - x_{k-1}) / dt, k = 1..K, from K+1 states.
Matrix forward_diff(const Eigen::Ref<const Matrix>& states, double dt);

/// Stacks all trajectories. Sample k of a trajectory pairs the derivative
/// (x_k - x_{k-1})/dt with state x_{k-1} and input column k-1, so data
/// produced by explicit Euler is fit exactly by the generating operators.
RegressionData assemble(const std::vector<Matrix>& projected_states, const std::vector<Matrix>& inputs,
                        double dt, bool constant);

/// Operators stacked as O = [A | B | F (| c)], n x cols.
Matrix stack_operators(const QuadraticModel& model, bool constant);
QuadraticModel unstack_operators(const Eigen::Ref<const Matrix>& O, Index n, Index p, bool constant);

/// Objective ||D O^T - R||_F^2 evaluated on the full data.
double data_misfit(const RegressionData& data, const Eigen::Ref<const Matrix>& O);

/// A regression problem reduced once by a thin QR of D so that repeated fits
/// (over a regularization grid) only touch a (cols x cols) system.
class LeastSquaresProblem {
 public:
  explicit LeastSquaresProblem(const RegressionData& data);

  [[nodiscard]] Index n() const { return n_; }
  [[nodiscard]] Index p() const { return p_; }
  [[nodiscard]] bool constant() const { return constant_; }

  /// Dispatch; epsilon and options only apply to Method::spir.
  [[nodiscard]] FitReport fit(Method method, double lambda, double epsilon = 1e-10,
                              const SpirOptions& options = {}) const;

  [[nodiscard]] FitReport fit_plain() const;
  [[nodiscard]] FitReport fit_tikhonov(double lambda) const;
  [[nodiscard]] FitReport fit_pir(double lambda) const;
  [[nodiscard]] FitReport fit_spir(double lambda, double epsilon, const SpirOptions& options = {}) const;

  /// J(O) + lambda * ||W O^T||_F^2 where W selects the penalized columns.
  [[nodiscard]] double objective(const Eigen::Ref<const Matrix>& O, Method method, double lambda) const;

 private:
  [[nodiscard]] Vector penalty_weights(Method method) const;
  [[nodiscard]] Matrix ridge_solve(const Vector& weights, double lambda) const;
  [[nodiscard]] FitReport finish(Matrix O, Method method, double lambda) const;

  Index n_ = 0;
  Index p_ = 0;
  bool constant_ = false;
  Matrix reduced_D_;         // R factor of D (or D itself when short and wide)
  Matrix reduced_R_;         // Q^T R, matching rows
  double residual_floor_ = 0.0;  // part of ||R||^2 orthogonal to range(D)
};

FitReport fit_plain(const RegressionData& data);
FitReport fit_tikhonov(const RegressionData& data, double lambda);
FitReport fit_pir(const RegressionData& data, double lambda);
FitReport fit_spir(const RegressionData& data, double lambda, double epsilon, const SpirOptions& options = {});

/// Euclidean projection onto {S symmetric : eig(S) <= -epsilon}:
/// symmetrize, then clip eigenvalues above -epsilon.
Matrix project_negative_definite(const Eigen::Ref<const Matrix>& A, double epsilon);

}  // namespace opinf::inference
