#include "helpers.hpp"
#include "opinf/errors.hpp"
#include "opinf/experiment.hpp"
#include "opinf/metrics.hpp"
#include "opinf/pod.hpp"

#include <gtest/gtest.h>

using namespace opinf;
using namespace opinf::metrics;

namespace {

Trajectory reduced_of(const Matrix& states) {
  Trajectory t;
  t.states = states;
  t.inputs = Matrix::Zero(1, states.cols() - 1);
  t.dt = 0.1;
  return t;
}

}  // namespace

TEST(Metrics, ProjectionFloorAndZeroPrediction) {
  std::mt19937_64 rng(1);
  const Matrix V = pod::pod_basis(testutil::random_matrix(8, 20, rng), 3).V;
  std::vector<Trajectory> preds;
  std::vector<Trajectory> zeros;
  std::vector<Matrix> truths;
  double floor = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Matrix X = testutil::random_matrix(8, 6, rng);
    truths.push_back(X);
    preds.push_back(reduced_of(V.transpose() * X));
    zeros.push_back(reduced_of(Matrix::Zero(3, 6)));
    floor += (V * V.transpose() * X - X).norm() / X.norm();
  }
  EXPECT_NEAR(train_error(V, preds, truths).value(), floor, 1e-12);
  EXPECT_NEAR(train_error(V, zeros, truths).value(), 3.0, 1e-14);
  preds[1].diverged = true;
  EXPECT_TRUE(train_error(V, preds, truths).is_diverged());
}

TEST(Metrics, TestErrorVariants) {
  std::mt19937_64 rng(2);
  const Matrix V = Matrix::Identity(2, 2);
  const Matrix X = testutil::random_matrix(2, 4, rng);
  const auto perfect = reduced_of(X);
  EXPECT_NEAR(test_error(V, {{perfect}}, {{X}}, TestVariant::single).value(), 0.0, 1e-15);

  const auto zero = reduced_of(Matrix::Zero(2, 4));
  std::vector<std::vector<Trajectory>> p7(7, std::vector<Trajectory>{zero});
  std::vector<std::vector<Matrix>> t7(7, std::vector<Matrix>{X});
  EXPECT_NEAR(test_error(V, p7, t7, TestVariant::per_parameter).value(), 7.0, 1e-14);

  std::vector<std::vector<Trajectory>> p35(7, std::vector<Trajectory>(5, zero));
  std::vector<std::vector<Matrix>> t35(7, std::vector<Matrix>(5, X));
  EXPECT_NEAR(test_error(V, p35, t35, TestVariant::per_parameter_and_input).value(), 35.0, 1e-13);
  EXPECT_THROW(test_error(V, p35, t35, TestVariant::per_parameter), ArgumentError);
}

TEST(Metrics, ErrorScoreAlgebra) {
  const auto d = ErrorScore::diverged();
  EXPECT_TRUE((ErrorScore(1.0) + d).is_diverged());
  EXPECT_LT(ErrorScore(1e300), d);
  EXPECT_EQ(ErrorScore(1.5) + ErrorScore(2.0), ErrorScore(3.5));
  EXPECT_TRUE(d.scaled(0.5).is_diverged());
}

TEST(Metrics, SummaryCsv) {
  ErrorSummary s;
  s.rows.push_back({"pir", 2, ErrorScore(0.5), ErrorScore(1.25), stability::Radius(0.75), false, 1e-3});
  s.rows.push_back({"plain", 2, ErrorScore(0.5), ErrorScore::diverged(), std::nullopt, true, std::nullopt});
  s.rows.push_back({"intrusive", 2, ErrorScore(0.5), ErrorScore(1.0), stability::Radius::unbounded(), false, {}});
  EXPECT_EQ(summary_csv(s),
            "method,n,e_train,e_test,rho,diverged\n"
            "pir,2,0.5,1.25,0.75,false\n"
            "plain,2,0.5,diverged,nan,true\n"
            "intrusive,2,0.5,1,inf,false\n");
}

TEST(Metrics, IntrusiveTrainErrorDecreasesWithDimension) {
  auto cfg = config::preset("synthetic");
  cfg.N = 32;
  cfg.steps = 300;
  cfg.dims = {2, 4, 6, 8, 10};
  const auto fom = experiment::make_fom(cfg);
  const auto basis = experiment::build_basis(cfg, fom);
  const auto training = experiment::training_trajectories(cfg, fom, basis.V, 10);
  double previous = 0.0;
  for (const Index n : cfg.dims) {
    const Matrix Vn = basis.V.leftCols(n);
    const auto fam = experiment::intrusive_family(cfg, fom, Vn);
    const ErrorScore e =
        experiment::evaluate(cfg, fom, fam, Vn, config::MethodKind::intrusive, cfg.train_params, training);
    ASSERT_FALSE(e.is_diverged());
    if (n > 2) {
      EXPECT_LE(e.value(), previous * 1.05) << "n = " << n;
    }
    previous = e.value();
  }
}
