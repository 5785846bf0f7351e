#include "helpers.hpp"
#include "opinf/errors.hpp"
#include "opinf/interp.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace opinf;
using namespace opinf::interp;

namespace {

QuadraticModel with_A(const Matrix& A) {
  const Index n = A.rows();
  return {A, Matrix::Ones(n, 1), Matrix::Zero(n, quadform::compressed_size(n))};
}

ModelFamily family_of(std::vector<double> params, std::vector<Matrix> As, Structure s = Structure::plain) {
  ModelFamily f;
  f.params = std::move(params);
  for (const auto& A : As) {
    f.models.push_back(with_A(A));
  }
  f.structure = s;
  return f;
}

}  // namespace

TEST(Interp, NodeReproduction) {
  std::mt19937_64 rng(1);
  ModelFamily f;
  f.params = {0.0, 0.5, 1.0};
  for (int i = 0; i < 3; ++i) {
    f.models.push_back(testutil::random_stable_model(3, 1, rng));
  }
  const auto m = interp_entrywise(f, 0.5, 1e-10);
  EXPECT_EQ(m.A, f.models[1].A);
  EXPECT_EQ(m.F, f.models[1].F);
}

TEST(Interp, ScalarMidpoint) {
  const auto f = family_of({0.0, 1.0}, {Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, -3.0)});
  EXPECT_NEAR(interp_entrywise(f, 0.5, 1e-10).A(0, 0), -2.0, 1e-15);
}

TEST(Interp, ReflectionAfterInterpolation) {
  const auto f = family_of({0.0, 1.0}, {Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, -3.0)});
  EXPECT_NEAR(interp_entrywise(f, 0.01, 1e-10).A(0, 0), -1e-10, 1e-15);
}

TEST(Interp, Extrapolation) {
  const auto f = family_of({0.0, 1.0}, {Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, -3.0)});
  EXPECT_THROW(interp_entrywise(f, 1.5, 1e-10), ExtrapolationError);
  EXPECT_THROW(interp_entrywise(f, -0.1, 1e-10), ExtrapolationError);
}

TEST(Interp, LogCholeskyMidpoint) {
  const Matrix I = Matrix::Identity(3, 3);
  const auto f = family_of({0.0, 1.0}, {-I, -4.0 * I}, Structure::snd_linear);
  EXPECT_LE((interp_log_cholesky(f, 0.5).A + 2.0 * I).norm(), 1e-12);
}

TEST(Interp, LogCholeskyConstantAndNodes) {
  const Matrix S = (Matrix(2, 2) << -3, 1, 1, -2).finished();
  const auto same = family_of({0.0, 1.0, 2.0}, {S, S, S}, Structure::snd_linear);
  for (double mu : {0.0, 0.3, 1.7, 2.0}) {
    EXPECT_LE((interp_log_cholesky(same, mu).A - S).norm(), 1e-12);
  }
  const Matrix T = (Matrix(2, 2) << -5, -0.5, -0.5, -1).finished();
  const auto f = family_of({0.0, 1.0}, {S, T}, Structure::snd_linear);
  EXPECT_LE((interp_log_cholesky(f, 1.0).A - T).norm(), 1e-12);
  EXPECT_LE((interp_log_cholesky(f, 0.0).A - S).norm(), 1e-12);
}

TEST(Interp, LogCholeskySweepStaysDefinite) {
  std::mt19937_64 rng(3);
  std::vector<Matrix> As;
  for (int i = 0; i < 4; ++i) {
    const Matrix G = testutil::random_matrix(4, 4, rng);
    As.push_back(-(G * G.transpose() + 0.1 * Matrix::Identity(4, 4)));
  }
  const auto f = family_of({0.0, 1.0, 2.0, 3.0}, As, Structure::snd_linear);
  for (int k = 0; k < 50; ++k) {
    const Matrix A = interp_log_cholesky(f, 3.0 * k / 49.0).A;
    EXPECT_EQ((A - A.transpose()).norm(), 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0);
  }
}

TEST(Interp, LogCholeskyRejectsIndefinite) {
  const auto f = family_of({0.0, 1.0}, {Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, -1.0)},
                           Structure::snd_linear);
  EXPECT_THROW(interp_log_cholesky(f, 0.5), StructureError);
}

TEST(Interp, FamilyValidation) {
  auto f = family_of({0.0, 0.0}, {-Matrix::Identity(1, 1), -Matrix::Identity(1, 1)});
  EXPECT_THROW(f.validate(), ArgumentError);
  const auto g = family_of({0.0, 1.0, 2.0}, {-Matrix::Identity(1, 1), -2 * Matrix::Identity(1, 1),
                                             -3 * Matrix::Identity(1, 1)});
  const auto h = g.without(1);
  EXPECT_EQ(h.params, (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(h.models[1].A(0, 0), -3.0);
}
