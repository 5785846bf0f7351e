#include "opinf/quadform.hpp"

#include "opinf/errors.hpp"

#include <cmath>

namespace opinf::quadform {

Index dimension_from_compressed(Index length) {
  if (length < 0) {
    return -1;
  }
  const auto n = static_cast<Index>(std::llround((std::sqrt(8.0 * static_cast<double>(length) + 1.0) - 1.0) / 2.0));
  return compressed_size(n) == length ? n : -1;
}

Vector compress_square(const Eigen::Ref<const Vector>& x) {
  const Index n = x.size();
  Vector out(compressed_size(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      out[k++] = x[i] * x[j];
    }
  }
  return out;
}

Matrix compress_square_columns(const Eigen::Ref<const Matrix>& states) {
  const Index n = states.rows();
  Matrix out(compressed_size(n), states.cols());
  for (Index c = 0; c < states.cols(); ++c) {
    Index k = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j <= i; ++j) {
        out(k++, c) = states(i, c) * states(j, c);
      }
    }
  }
  return out;
}

Vector kron_square(const Eigen::Ref<const Vector>& x) {
  const Index n = x.size();
  Vector out(n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out[i * n + j] = x[i] * x[j];
    }
  }
  return out;
}

Matrix expand_quadratic(const Eigen::Ref<const Matrix>& F) {
  const Index n = F.rows();
  if (F.cols() != compressed_size(n)) {
    throw ArgumentError("quadform", "compressed operator must have n(n+1)/2 columns");
  }
  Matrix H = Matrix::Zero(n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      H.col(i * n + j) = F.col(pair_index(i, j));
    }
  }
  return H;
}

Matrix compress_quadratic(const Eigen::Ref<const Matrix>& H) {
  const Index n = H.rows();
  if (H.cols() != n * n) {
    throw ArgumentError("quadform", "Kronecker operator must have n^2 columns");
  }
  Matrix F(n, compressed_size(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      if (i == j) {
        F.col(pair_index(i, j)) = H.col(i * n + i);
      } else {
        F.col(pair_index(i, j)) = H.col(i * n + j) + H.col(j * n + i);
      }
    }
  }
  return F;
}

}  // namespace opinf::quadform
