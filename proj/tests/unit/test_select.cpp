#include "helpers.hpp"
#include "opinf/errors.hpp"
#include "opinf/experiment.hpp"
#include "opinf/fom.hpp"
#include "opinf/pod.hpp"
#include "opinf/select.hpp"

#include <gtest/gtest.h>

using namespace opinf;
using namespace opinf::select;

TEST(Select, GridExactDecades) {
  const auto g = build_grid(1e-2, 1e2, 5);
  const std::vector<double> want{1e-2, 1e-1, 1.0, 1e1, 1e2};
  ASSERT_EQ(g.values.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(g.values[i], want[i]);
  }
  const auto two = build_grid(3.0, 7.0, 2);
  EXPECT_EQ(two.values, (std::vector<double>{3.0, 7.0}));
  const auto wide = build_grid(1e-15, 1e5, 51);
  EXPECT_EQ(wide.values.front(), 1e-15);
  EXPECT_EQ(wide.values.back(), 1e5);
  for (std::size_t i = 1; i < 51; ++i) {
    EXPECT_NEAR(wide.values[i] / wide.values[i - 1], std::pow(10.0, 0.4), 1e-12);
  }
  EXPECT_THROW(build_grid(0.0, 1.0, 5), ArgumentError);
  EXPECT_THROW(build_grid(1.0, 0.5, 5), ArgumentError);
  EXPECT_THROW(build_grid(1.0, 2.0, 1), ArgumentError);
}

TEST(Select, ChooseIndex) {
  const auto d = ErrorScore::diverged();
  EXPECT_EQ(choose_index({d, ErrorScore(3.0), d}), 1u);
  EXPECT_EQ(choose_index({ErrorScore(1.0), ErrorScore(2.0), ErrorScore(1.0)}), 2u);  // tie -> larger lambda
  EXPECT_THROW(choose_index({d, d}), SelectionError);
}

TEST(Select, ValidationErrorBounds) {
  std::mt19937_64 rng(1);
  const Matrix V = pod::pod_basis(testutil::random_matrix(6, 12, rng), 2).V;
  Trajectory truth;
  truth.dt = 0.1;
  truth.inputs = Matrix::Zero(1, 3);
  // constant states in range(V): the zero model reproduces them exactly
  truth.states = (V * testutil::random_matrix(2, 1, rng)).replicate(1, 4);
  const QuadraticModel still(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(2, 3));
  EXPECT_NEAR(validation_error(still, {truth, truth}, V).value(), 0.0, 1e-14);
  const QuadraticModel boom(Matrix::Constant(2, 2, 1e6), Matrix::Zero(2, 1), Matrix::Zero(2, 3));
  EXPECT_TRUE(validation_error(boom, {truth}, V).is_diverged());
}

namespace {

// Small synthetic bundle: N = 32, M = 5 parameters, 2 training trajectories.
struct Bundle {
  std::vector<double> params{0.1, 0.325, 0.55, 0.775, 1.0};
  std::vector<std::vector<Trajectory>> trajectories;
  Matrix V;
  fom::FomFamily fam = fom::build_synthetic(32, 17, 1.0 / 32.0);
  Bundle() {
    std::vector<Matrix> snaps;
    for (std::size_t j = 0; j < params.size(); ++j) {
      const auto m = fam.at(params[j]);
      std::vector<Trajectory> per;
      for (std::uint64_t i = 0; i < 2; ++i) {
        const Matrix U = fom::sample_signal({0, 2, 1, 400, fom::derive_seed(3, {j, i})});
        const Vector x0 = fom::sample_signal({0, 1, 32, 1, fom::derive_seed(4, {j, i})}).col(0);
        per.push_back(dynamics::simulate(m, x0, U, 1e-3));
        snaps.push_back(per.back().states);
      }
      trajectories.push_back(per);
    }
    V = pod::pod_basis(pod::assemble_snapshots(snaps), 4).V;
  }
};

}  // namespace

TEST(Select, EndToEndSynthetic) {
  const Bundle b;
  TrainingBundle tb{b.params, b.trajectories, b.V, false, 1e-10, {}};
  const auto grid = build_grid(1e-12, 1e4, 9);
  const auto result = select_lambda(tb, grid, inference::Method::pir);
  EXPECT_FALSE(result.table.mean[result.index].is_diverged());
  EXPECT_EQ(result.table.params.size(), 3u);
  EXPECT_EQ(result.table.errors.size(), 9u);
  EXPECT_EQ(result.family.models.size(), 5u);
  // bit-exact recompute of one cell
  const LambdaSelector sel(tb, inference::Method::pir);
  const auto fam = sel.fit_family(grid.values[4]);
  EXPECT_EQ(sel.cell(fam, 2), result.table.errors[4][1]);
  // test evaluation at a fresh parameter is finite
  const Vector x0 = fom::sample_signal({0, 1, 32, 1, 99}).col(0);
  const Matrix U = fom::sample_signal({0, 2, 1, 400, 98});
  const Trajectory truth = dynamics::simulate(b.fam.at(0.43), x0, U, 1e-3);
  const auto model = interp::interpolate(result.family, 0.43, 1e-10);
  EXPECT_FALSE(validation_error(model, {truth}, b.V).is_diverged());
  // csv layout
  const std::string csv = result.table.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')).substr(0, 7), "lambda,");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST(Select, ThreeParametersSingleInterior) {
  const Bundle b;
  std::vector<double> p{b.params[0], b.params[2], b.params[4]};
  std::vector<std::vector<Trajectory>> t{b.trajectories[0], b.trajectories[2], b.trajectories[4]};
  TrainingBundle tb{p, t, b.V, false, 1e-10, {}};
  const auto grid = build_grid(1e-8, 1e2, 3);
  const auto r = select_lambda(tb, grid, inference::Method::tikhonov);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_EQ(r.table.errors[i].size(), 1u);
    EXPECT_EQ(r.table.mean[i], r.table.errors[i][0]);
  }
  TrainingBundle two{{p[0], p[1]}, {t[0], t[1]}, b.V, false, 1e-10, {}};
  EXPECT_THROW(select_lambda(two, grid, inference::Method::pir), ArgumentError);
}

TEST(Select, SpirUsesLogCholesky) {
  const Bundle b;
  TrainingBundle tb{b.params, b.trajectories, b.V, false, 1e-10, {}};
  const LambdaSelector sel(tb, inference::Method::spir);
  EXPECT_EQ(sel.structure(), interp::Structure::snd_linear);
  const auto fam = sel.fit_family(1e-6);
  EXPECT_EQ(fam.structure, interp::Structure::snd_linear);
  for (const auto& m : fam.models) {
    EXPECT_LE((m.A - m.A.transpose()).norm(), 1e-12);
  }
}
