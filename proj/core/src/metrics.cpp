#include "opinf/metrics.hpp"

#include "opinf/csv_io.hpp"
#include "opinf/errors.hpp"

#include <sstream>

namespace opinf::metrics {

ErrorScore trajectory_error(const Eigen::Ref<const Matrix>& V, const Trajectory& reduced,
                            const Eigen::Ref<const Matrix>& truth) {
  if (reduced.diverged) {
    return ErrorScore::diverged();
  }
  if (reduced.states.rows() != V.cols() || truth.rows() != V.rows() || truth.cols() != reduced.states.cols()) {
    throw ArgumentError("metrics", "prediction, truth and basis shapes do not conform");
  }
  const double denom = truth.norm();
  if (denom == 0.0) {
    throw ArgumentError("metrics", "relative error undefined for a zero reference trajectory");
  }
  return ErrorScore((V * reduced.states - truth).norm() / denom);
}

ErrorScore train_error(const Eigen::Ref<const Matrix>& V, const std::vector<Trajectory>& predictions,
                       const std::vector<Matrix>& truths) {
  if (predictions.size() != truths.size()) {
    throw ArgumentError("metrics", "need one prediction per training trajectory");
  }
  ErrorScore total;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    total += trajectory_error(V, predictions[i], truths[i]);
  }
  return total;
}

ErrorScore test_error(const Eigen::Ref<const Matrix>& V, const std::vector<std::vector<Trajectory>>& predictions,
                      const std::vector<std::vector<Matrix>>& truths, TestVariant variant) {
  if (predictions.size() != truths.size()) {
    throw ArgumentError("metrics", "prediction and truth layouts differ");
  }
  if (variant == TestVariant::single && predictions.size() != 1) {
    throw ArgumentError("metrics", "single-trajectory test error expects exactly one test parameter");
  }
  const std::size_t inner = predictions.empty() ? 0 : predictions.front().size();
  ErrorScore total;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].size() != truths[i].size()) {
      throw ArgumentError("metrics", "prediction and truth layouts differ");
    }
    if (variant != TestVariant::per_parameter_and_input && predictions[i].size() != 1) {
      throw ArgumentError("metrics", "this test-error variant expects one trajectory per parameter");
    }
    if (predictions[i].size() != inner) {
      throw ArgumentError("metrics", "every test parameter needs the same number of trajectories");
    }
    for (std::size_t j = 0; j < predictions[i].size(); ++j) {
      total += trajectory_error(V, predictions[i][j], truths[i][j]);
    }
  }
  return total;
}

std::string summary_csv(const ErrorSummary& summary) {
  std::ostringstream os;
  os << "method,n,e_train,e_test,rho,diverged\n";
  auto score = [](const ErrorScore& s) { return s.is_diverged() ? std::string("diverged") : csv::format_number(s.value()); };
  for (const auto& row : summary.rows) {
    std::string rho = "nan";
    if (row.rho) {
      rho = row.rho->is_unbounded() ? "inf" : csv::format_number(row.rho->value());
    }
    os << row.method << ',' << row.n << ',' << score(row.e_train) << ',' << score(row.e_test) << ',' << rho << ','
       << (row.diverged ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace opinf::metrics
