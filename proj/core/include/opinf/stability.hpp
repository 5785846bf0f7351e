#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/types.hpp"

#include <compare>
#include <limits>

namespace opinf::stability {

/// Stability radius with an unbounded sentinel that orders above every finite
/// radius (used when the quadratic operator vanishes).
class Radius {
 public:
  constexpr Radius() = default;
  constexpr explicit Radius(double value) : value_(value) {}
  static constexpr Radius unbounded() {
    Radius r;
    r.unbounded_ = true;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  [[nodiscard]] constexpr bool is_unbounded() const { return unbounded_; }
  [[nodiscard]] constexpr double value() const { return value_; }

  friend constexpr bool operator==(const Radius& a, const Radius& b) {
    return a.unbounded_ == b.unbounded_ && (a.unbounded_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(const Radius& a, const Radius& b) {
    if (a.unbounded_ || b.unbounded_) {
      return a.unbounded_ <=> b.unbounded_;
    }
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool unbounded_ = false;
};

struct StabilityReport {
  bool hurwitz = false;
  Radius rho;           ///< meaningful only when hurwitz
  Matrix P;             ///< Lyapunov solution for L = I; empty when not hurwitz
  double sigma_min_L = 1.0;
};

/// Eigenvector condition number above which a matrix is treated as
/// non-diagonalizable by reflect_eigenvalues.
inline constexpr double kDiagonalizableCondition = 1e12;

/// Solves A^T P + P A = -Q through the n^2 x n^2 Kronecker system
/// (I (x) A^T + A^T (x) I) vec(P) = -vec(Q). The output is symmetrized.
/// Throws StabilityError if A is not Hurwitz and NumericError if the system is
/// singular or the residual exceeds 1e-10 ||Q||_F.
Matrix solve_lyapunov(const Eigen::Ref<const Matrix>& A, const Eigen::Ref<const Matrix>& Q);

/// rho = sigma_min(L) / (2 sqrt(||P||_F) ||H||_F) with L = I, hence Q = I and
/// H = expand_quadratic(F). Non-Hurwitz A yields hurwitz = false.
StabilityReport stability_radius(const QuadraticModel& model);

/// All eigenvalues have strictly negative real part.
bool is_hurwitz(const Eigen::Ref<const Matrix>& A);

/// Replaces every eigenvalue with nonnegative real part by -epsilon + i Im,
/// keeping the eigenvectors. Matrices that are already Hurwitz are returned
/// unchanged. Throws DiagonalizabilityError when the eigenvector matrix has
/// condition number above kDiagonalizableCondition.
Matrix reflect_eigenvalues(const Eigen::Ref<const Matrix>& A, double epsilon);

}  // namespace opinf::stability
