#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/inference.hpp"
#include "opinf/interp.hpp"
#include "opinf/types.hpp"

#include <string>
#include <vector>

namespace opinf::select {

/// Log-uniform grid lo = value_1 < ... < value_m = hi.
struct LambdaGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;
};

/// lambda_k = lo (hi/lo)^((k-1)/(m-1)), computed in log10 space so that
/// decade endpoints land exactly. Throws ArgumentError unless 0 < lo <= hi
/// and m >= 2.
LambdaGrid build_grid(double lo, double hi, std::size_t m);

/// Index of the smallest finite mean; ties go to the larger index (larger
/// lambda). Throws SelectionError if all entries are the divergence sentinel.
std::size_t choose_index(const std::vector<ErrorScore>& means);

/// Full-order training data at the training parameters, plus the basis.
struct TrainingBundle {
  std::vector<double> params;                       ///< strictly increasing
  std::vector<std::vector<Trajectory>> trajectories;  ///< [parameter][trajectory]
  Matrix V;
  bool constant = false;
  double epsilon = 1e-10;
  inference::SpirOptions spir;
};

/// Sum over held-out trajectories of ||V Xhat - X||_F / ||X||_F where Xhat
/// integrates the model from V^T x_0 with the trajectory's inputs and dt.
/// A diverged simulation yields the sentinel.
ErrorScore validation_error(const QuadraticModel& model, const std::vector<Trajectory>& held_out,
                            const Eigen::Ref<const Matrix>& V);

/// Validation errors, rows = grid values, columns = interior parameters.
struct ValidationTable {
  std::vector<double> lambdas;
  std::vector<double> params;                    ///< mu_2 .. mu_{M-1}
  std::vector<std::vector<ErrorScore>> errors;   ///< [lambda][interior parameter]
  std::vector<ErrorScore> mean;                  ///< per lambda
  std::size_t chosen = 0;

  /// CSV: header lambda,mu_<value>...,mean; one row per lambda.
  [[nodiscard]] std::string to_csv() const;
};

struct SelectionResult {
  double lambda = 0.0;
  std::size_t index = 0;
  ValidationTable table;
  interp::ModelFamily family;  ///< fitted at lambda for all training parameters
};

/// Leave-one-out selection machinery for one method. Regression problems are
/// reduced once per training parameter and reused for every grid value.
class LambdaSelector {
 public:
  LambdaSelector(const TrainingBundle& bundle, inference::Method method);

  [[nodiscard]] inference::Method method() const { return method_; }
  [[nodiscard]] interp::Structure structure() const;

  /// Models fitted with lambda at every training parameter.
  [[nodiscard]] interp::ModelFamily fit_family(double lambda) const;

  /// Validation error of the family with node j removed, interpolated back at
  /// mu_j and integrated with mu_j's training inputs. Interpolation failures
  /// (non-diagonalizable or non-definite operators) count as divergence.
  [[nodiscard]] ErrorScore cell(const interp::ModelFamily& family, std::size_t j) const;

  /// Full sweep. Ties on the mean go to the larger lambda. Throws
  /// SelectionError if every mean is the divergence sentinel.
  [[nodiscard]] SelectionResult run(const LambdaGrid& grid) const;

 private:
  const TrainingBundle& bundle_;
  inference::Method method_;
  std::vector<inference::LeastSquaresProblem> problems_;
};

/// Convenience wrapper around LambdaSelector::run. Requires M >= 3.
SelectionResult select_lambda(const TrainingBundle& bundle, const LambdaGrid& grid, inference::Method method);

/// Projected regression data for one training parameter.
inference::RegressionData regression_data(const std::vector<Trajectory>& trajectories,
                                          const Eigen::Ref<const Matrix>& V, bool constant);

}  // namespace opinf::select
