#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/types.hpp"

#include <vector>

namespace opinf::pod {

struct PodBasis {
  Matrix V;                ///< N x n, orthonormal columns
  Vector singular_values;  ///< all singular values of the snapshot matrix

  [[nodiscard]] Index full_dim() const { return V.rows(); }
  [[nodiscard]] Index dim() const { return V.cols(); }

  /// Leading k columns (k <= dim()).
  [[nodiscard]] PodBasis truncated(Index k) const;
};

/// Relative singular-value cutoff below which a direction counts as rank
/// deficient.
inline constexpr double kRankTolerance = 1e-13;

/// Column-wise concatenation, in the order given.
Matrix assemble_snapshots(const std::vector<Matrix>& trajectories);

/// Leading n left singular vectors of the thin SVD of the snapshots. Each
/// column is sign-normalized so that its largest-magnitude entry is positive.
PodBasis pod_basis(const Eigen::Ref<const Matrix>& snapshots, Index n);

/// Intrusive Galerkin reduction: V^T A V, V^T B, V^T c and the reduced
/// compressed quadratic operator, equal to
/// compress_quadratic(V^T expand_quadratic(F) (V (x) V)).
QuadraticModel galerkin_reduce(const QuadraticModel& fom, const Eigen::Ref<const Matrix>& V);

/// V^T X.
Matrix project_trajectory(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Matrix>& V);

}  // namespace opinf::pod
