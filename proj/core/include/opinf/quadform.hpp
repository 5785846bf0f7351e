#pragma once

#include "opinf/types.hpp"

namespace opinf::quadform {

/// Number of distinct pairwise products of an n-vector, n(n+1)/2.
constexpr Index compressed_size(Index n) { return n * (n + 1) / 2; }

/// Position of the product x_i * x_j (0-based, j <= i) inside the compressed
/// square. Block i starts at i(i+1)/2 and holds x_i*x_0, ..., x_i*x_i.
constexpr Index pair_index(Index i, Index j) { return i * (i + 1) / 2 + j; }

/// Recover n from a compressed length n(n+1)/2; returns -1 if the length is
/// not triangular.
Index dimension_from_compressed(Index length);

/// Compressed square x^2: blocks x_i * [x_0, ..., x_i] concatenated over i.
Vector compress_square(const Eigen::Ref<const Vector>& x);

/// Compressed square applied column-wise to a trajectory.
Matrix compress_square_columns(const Eigen::Ref<const Matrix>& states);

/// Kronecker square x (x) x with entry (i*n + j) = x_i * x_j.
Vector kron_square(const Eigen::Ref<const Vector>& x);

/// Expand a compressed quadratic operator F (n x n(n+1)/2) to the Kronecker
/// form H (n x n^2). The coefficient of pair (i, j), i >= j, is copied to
/// column i*n + j; the mirrored column j*n + i stays zero, so ||H||_F = ||F||_F.
Matrix expand_quadratic(const Eigen::Ref<const Matrix>& F);

/// Inverse of expand_quadratic: off-diagonal compressed columns are the sum of
/// the two mirrored Kronecker columns.
Matrix compress_quadratic(const Eigen::Ref<const Matrix>& H);

}  // namespace opinf::quadform
