#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/quadform.hpp"

#include <random>

namespace opinf::testutil {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = d(rng);
    }
  }
  return m;
}

// Stable random quadratic model: A = -(G G^T + shift I), small B and F.
inline QuadraticModel random_stable_model(Index n, Index p, std::mt19937_64& rng, double f_scale = 0.1) {
  const Matrix G = random_matrix(n, n, rng);
  Matrix A = -(G * G.transpose()) - 1.0 * Matrix::Identity(n, n);
  A += 0.2 * random_matrix(n, n, rng);  // non-symmetric part
  return {A, random_matrix(n, p, rng), f_scale * random_matrix(n, quadform::compressed_size(n), rng)};
}

inline double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

}  // namespace opinf::testutil
