#include "helpers.hpp"
#include "opinf/quadform.hpp"

#include <gtest/gtest.h>

using namespace opinf;
using namespace opinf::quadform;

TEST(Quadform, CompressedSquareExamples) {
  EXPECT_EQ(compress_square(Vector::Map(std::vector<double>{1, 2}.data(), 2)), (Vector(3) << 1, 2, 4).finished());
  EXPECT_EQ(compress_square(Vector::Zero(3)), Vector::Zero(6));
  EXPECT_EQ(compress_square((Vector(1) << 3).finished()), (Vector(1) << 9).finished());
}

TEST(Quadform, PairLayout) {
  const Vector x = (Vector(4) << 2, 3, 5, 7).finished();
  const Vector s = compress_square(x);
  ASSERT_EQ(s.size(), compressed_size(4));
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j <= i; ++j) {
      EXPECT_EQ(s(pair_index(i, j)), x(i) * x(j));
    }
  }
  EXPECT_EQ(dimension_from_compressed(10), 4);
  EXPECT_EQ(dimension_from_compressed(0), 0);
  EXPECT_EQ(dimension_from_compressed(7), -1);
}

TEST(Quadform, KronSquareExamples) {
  EXPECT_EQ(kron_square((Vector(2) << 1, 2).finished()), (Vector(4) << 1, 2, 2, 4).finished());
  EXPECT_EQ(kron_square((Vector(1) << 0).finished()), (Vector(1) << 0).finished());
  EXPECT_EQ(kron_square((Vector(2) << 3, -1).finished()), (Vector(4) << 9, -3, -3, 1).finished());
}

TEST(Quadform, ExpandExamples) {
  EXPECT_EQ(expand_quadratic((Matrix(1, 1) << 2.5).finished()), (Matrix(1, 1) << 2.5).finished());
  EXPECT_EQ(expand_quadratic((Matrix(2, 3) << 1, 2, 3, 0, 0, 0).finished()),
            (Matrix(2, 4) << 1, 0, 2, 3, 0, 0, 0, 0).finished());
}

TEST(Quadform, ExpandMatchesCompressedProduct) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix F = testutil::random_matrix(3, 6, rng);
    const Vector x = testutil::random_matrix(3, 1, rng);
    const Matrix H = expand_quadratic(F);
    EXPECT_LE((F * compress_square(x) - H * kron_square(x)).norm(), 1e-13);
    EXPECT_NEAR(H.norm(), F.norm(), 1e-14);
  }
}

TEST(Quadform, CompressRoundTripAndMirrorSum) {
  std::mt19937_64 rng(2);
  const Matrix F = testutil::random_matrix(4, 10, rng);
  EXPECT_LE((compress_quadratic(expand_quadratic(F)) - F).norm(), 1e-15);

  Matrix H = Matrix::Zero(2, 4);
  H(0, 1) = 0.5;  // x_0 x_1
  H(0, 2) = 0.5;  // x_1 x_0
  const Matrix C = compress_quadratic(H);
  EXPECT_DOUBLE_EQ(C(0, pair_index(1, 0)), 1.0);
  EXPECT_EQ(compress_quadratic(Matrix::Zero(2, 4)), Matrix::Zero(2, 3));
}

TEST(Quadform, CompressPreservesAction) {
  std::mt19937_64 rng(3);
  const Matrix H = testutil::random_matrix(3, 9, rng);
  const Vector x = testutil::random_matrix(3, 1, rng);
  EXPECT_LE((compress_quadratic(H) * compress_square(x) - H * kron_square(x)).norm(), 1e-13);
}

TEST(Quadform, ColumnsVariant) {
  std::mt19937_64 rng(4);
  const Matrix X = testutil::random_matrix(3, 5, rng);
  const Matrix S = compress_square_columns(X);
  for (Index k = 0; k < 5; ++k) {
    EXPECT_EQ(S.col(k), compress_square(X.col(k)));
  }
}
