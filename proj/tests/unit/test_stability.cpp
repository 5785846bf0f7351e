#include "helpers.hpp"
#include "opinf/errors.hpp"
#include "opinf/stability.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>

using namespace opinf;
using namespace opinf::stability;

TEST(Stability, LyapunovClosedForms) {
  const Matrix P = solve_lyapunov(-Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  EXPECT_LE((P - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);
  const Matrix D = (Matrix(2, 2) << -1, 0, 0, -2).finished();
  const Matrix P2 = solve_lyapunov(D, Matrix::Identity(2, 2));
  EXPECT_LE((P2 - (Matrix(2, 2) << 0.5, 0, 0, 0.25).finished()).norm(), 1e-15);
}

TEST(Stability, LyapunovResidual) {
  std::mt19937_64 rng(1);
  const auto m = testutil::random_stable_model(5, 1, rng);
  const Matrix Q = Matrix::Identity(5, 5);
  const Matrix P = solve_lyapunov(m.A, Q);
  EXPECT_LE((m.A.transpose() * P + P * m.A + Q).norm(), 1e-10);
  EXPECT_THROW(solve_lyapunov(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), StabilityError);
}

TEST(Stability, RadiusOracle) {
  Matrix F = Matrix::Zero(2, 3);
  F(0, 0) = 1.0;
  const QuadraticModel m(-Matrix::Identity(2, 2), Matrix::Zero(2, 1), F);
  const auto r = stability_radius(m);
  ASSERT_TRUE(r.hurwitz);
  EXPECT_NEAR(r.rho.value(), 0.594604, 1e-6);
  QuadraticModel doubled = m;
  doubled.F *= 2.0;
  EXPECT_NEAR(stability_radius(doubled).rho.value(), 0.5 * r.rho.value(), 1e-12 * r.rho.value());
  QuadraticModel zero = m;
  zero.F.setZero();
  EXPECT_TRUE(stability_radius(zero).rho.is_unbounded());
  EXPECT_GT(stability_radius(zero).rho, r.rho);
  const QuadraticModel unstable(Matrix::Identity(2, 2), Matrix::Zero(2, 1), F);
  EXPECT_FALSE(stability_radius(unstable).hurwitz);
}

TEST(Stability, HurwitzExamples) {
  EXPECT_TRUE(is_hurwitz(-Matrix::Identity(3, 3)));
  EXPECT_FALSE(is_hurwitz((Matrix(2, 2) << 0, 1, -1, 0).finished()));
  EXPECT_TRUE(is_hurwitz((Matrix(2, 2) << -1, 100, 0, -1).finished()));
}

TEST(Stability, ReflectExamples) {
  const Matrix out = reflect_eigenvalues((Matrix(2, 2) << 2, 0, 0, -3).finished(), 1e-10);
  EXPECT_NEAR(out(0, 0), -1e-10, 1e-15);
  EXPECT_NEAR(out(1, 1), -3.0, 1e-14);
  EXPECT_NEAR(out(0, 1), 0.0, 1e-15);

  std::mt19937_64 rng(2);
  const auto m = testutil::random_stable_model(4, 1, rng);
  EXPECT_LE((reflect_eigenvalues(m.A, 1e-10) - m.A).norm(), 1e-12);

  const Matrix rot = (Matrix(2, 2) << 1, 2, -2, 1).finished();
  const Matrix r = reflect_eigenvalues(rot, 1e-10);
  Eigen::EigenSolver<Matrix> es(r);
  for (Index i = 0; i < 2; ++i) {
    EXPECT_NEAR(es.eigenvalues()(i).real(), -1e-10, 1e-10);
    EXPECT_NEAR(std::abs(es.eigenvalues()(i).imag()), 2.0, 1e-10);
  }
}

TEST(Stability, ReflectRejectsDefective) {
  const Matrix jordan = (Matrix(2, 2) << 1, 1, 0, 1).finished();
  EXPECT_THROW(reflect_eigenvalues(jordan, 1e-10), DiagonalizabilityError);
}
