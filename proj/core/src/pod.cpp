#include "opinf/pod.hpp"

#include "opinf/errors.hpp"
#include "opinf/quadform.hpp"

#include <Eigen/SVD>
#include <Eigen/Sparse>

namespace opinf::pod {

PodBasis PodBasis::truncated(Index k) const {
  if (k < 1 || k > dim()) {
    throw ArgumentError("pod", "truncation dimension out of range");
  }
  return {V.leftCols(k), singular_values};
}

Matrix assemble_snapshots(const std::vector<Matrix>& trajectories) {
  if (trajectories.empty()) {
    throw ArgumentError("pod", "no trajectories to assemble");
  }
  const Index N = trajectories.front().rows();
  Index width = 0;
  for (const auto& t : trajectories) {
    if (t.rows() != N) {
      throw ArgumentError("pod", "trajectories differ in state dimension");
    }
    width += t.cols();
  }
  Matrix out(N, width);
  Index col = 0;
  for (const auto& t : trajectories) {
    out.middleCols(col, t.cols()) = t;
    col += t.cols();
  }
  return out;
}

PodBasis pod_basis(const Eigen::Ref<const Matrix>& snapshots, Index n) {
  if (n < 1 || n > std::min(snapshots.rows(), snapshots.cols())) {
    throw ArgumentError("pod", "basis dimension must lie in [1, min(N, #snapshots)]");
  }
  if (!snapshots.allFinite()) {
    throw ArgumentError("pod", "snapshot matrix contains non-finite entries");
  }
  Eigen::BDCSVD<Matrix> svd(snapshots, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  if (sv[0] == 0.0 || sv[n - 1] / sv[0] < kRankTolerance) {
    throw RankError("pod", "requested dimension exceeds the numerical rank of the snapshots");
  }
  PodBasis basis;
  basis.singular_values = sv;
  basis.V = svd.matrixU().leftCols(n);
  for (Index j = 0; j < n; ++j) {
    Index imax = 0;
    basis.V.col(j).cwiseAbs().maxCoeff(&imax);
    if (basis.V(imax, j) < 0.0) {
      basis.V.col(j) *= -1.0;
    }
  }
  return basis;
}

namespace {

// Reduced compressed column for pair (a, b): V^T F w where w holds, for each
// full-order pair (i, j), the coefficient of xhat_a * xhat_b in x_i * x_j.
template <typename QuadOp>
Matrix reduce_quadratic(const QuadOp& F, const Eigen::Ref<const Matrix>& V) {
  const Index N = V.rows();
  const Index n = V.cols();
  Matrix weights(quadform::compressed_size(N), quadform::compressed_size(n));
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b <= a; ++b) {
      auto w = weights.col(quadform::pair_index(a, b));
      Index k = 0;
      for (Index i = 0; i < N; ++i) {
        for (Index j = 0; j <= i; ++j) {
          double coef = V(i, a) * V(j, b);
          if (a != b && i != j) {
            coef += V(i, b) * V(j, a);
          } else if (a != b) {
            coef *= 2.0;
          }
          w[k++] = coef;
        }
      }
    }
  }
  Matrix FW = F * weights;
  return V.transpose() * FW;
}

}  // namespace

QuadraticModel galerkin_reduce(const QuadraticModel& fom, const Eigen::Ref<const Matrix>& V) {
  fom.validate();
  if (V.rows() != fom.dim()) {
    throw ArgumentError("pod", "basis rows differ from full-order dimension");
  }
  const Matrix Vt = V.transpose();
  Matrix A = Vt * fom.A * V;
  Matrix B = Vt * fom.B;
  Vector c = Vt * fom.c;
  const Index nnz = (fom.F.array() != 0.0).count();
  Matrix F;
  if (nnz * 4 < fom.F.size()) {
    const Eigen::SparseMatrix<double> sparse_F = fom.F.sparseView();
    F = reduce_quadratic(sparse_F, V);
  } else {
    F = reduce_quadratic(fom.F, V);
  }
  return {std::move(A), std::move(B), std::move(F), std::move(c)};
}

Matrix project_trajectory(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Matrix>& V) {
  if (X.rows() != V.rows()) {
    throw ArgumentError("pod", "trajectory rows differ from basis rows");
  }
  return V.transpose() * X;
}

}  // namespace opinf::pod
