#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/stability.hpp"
#include "opinf/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opinf::metrics {

/// ||V Xhat - X||_F / ||X||_F, or the divergence sentinel if the reduced
/// trajectory diverged.
ErrorScore trajectory_error(const Eigen::Ref<const Matrix>& V, const Trajectory& reduced,
                            const Eigen::Ref<const Matrix>& truth);

/// Sum of relative errors over the training trajectories.
ErrorScore train_error(const Eigen::Ref<const Matrix>& V, const std::vector<Trajectory>& predictions,
                       const std::vector<Matrix>& truths);

/// Summation structure of a test error.
enum class TestVariant {
  single,                   ///< one test trajectory
  per_parameter,            ///< one trajectory per test parameter
  per_parameter_and_input,  ///< M'_test trajectories per test parameter
};

/// predictions[i][j] is trajectory j at test parameter i; truths mirrors the
/// layout. Any diverged prediction makes the whole sum diverged.
ErrorScore test_error(const Eigen::Ref<const Matrix>& V, const std::vector<std::vector<Trajectory>>& predictions,
                      const std::vector<std::vector<Matrix>>& truths, TestVariant variant);

/// One row of an experiment summary.
struct SummaryRow {
  std::string method;
  Index n = 0;
  ErrorScore e_train;
  ErrorScore e_test;
  std::optional<stability::Radius> rho;  ///< empty when undefined (non-Hurwitz)
  bool diverged = false;
  std::optional<double> lambda;          ///< selected regularization, if any
};

struct ErrorSummary {
  std::vector<SummaryRow> rows;
};

/// CSV with columns method,n,e_train,e_test,rho,diverged. Diverged errors are
/// written as "diverged", an unbounded radius as "inf", an undefined one as
/// "nan".
std::string summary_csv(const ErrorSummary& summary);

}  // namespace opinf::metrics
