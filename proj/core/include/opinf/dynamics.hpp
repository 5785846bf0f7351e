#pragma once

#include "opinf/types.hpp"

#include <optional>

namespace opinf {

/// Quadratic model dx/dt = A x + B u + F x^2 + c.
///
/// F acts on the compressed square (see quadform.hpp). The constant term c is
/// zero unless a problem needs a state-independent forcing.
struct QuadraticModel {
  Matrix A;  ///< n x n
  Matrix B;  ///< n x p
  Matrix F;  ///< n x n(n+1)/2
  Vector c;  ///< n

  QuadraticModel() = default;
  QuadraticModel(Matrix A_, Matrix B_, Matrix F_, std::optional<Vector> c_ = std::nullopt);

  [[nodiscard]] Index dim() const { return A.rows(); }
  [[nodiscard]] Index input_dim() const { return B.cols(); }

  /// Throws ArgumentError on inconsistent shapes or non-finite entries.
  void validate() const;

  /// Right-hand side f(x, u).
  [[nodiscard]] Vector rhs(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& u) const;
};

struct Trajectory {
  Matrix states;  ///< n x (K+1), column 0 is the initial condition
  Matrix inputs;  ///< p x K
  double dt = 0.0;
  bool diverged = false;

  [[nodiscard]] Index steps() const { return inputs.cols(); }
};

namespace dynamics {

/// Entries larger than this in magnitude mark a trajectory as diverged.
inline constexpr double kBlowUpThreshold = 1e8;

Vector euler_step(const QuadraticModel& model, const Eigen::Ref<const Vector>& x,
                  const Eigen::Ref<const Vector>& u, double dt);

/// Explicit Euler over inputs.cols() steps. On the first non-finite entry or
/// entry exceeding kBlowUpThreshold the remaining columns (including the
/// offending one) are filled with NaN and diverged is set.
Trajectory simulate(const QuadraticModel& model, const Eigen::Ref<const Vector>& x0,
                    const Eigen::Ref<const Matrix>& inputs, double dt);

}  // namespace dynamics
}  // namespace opinf
