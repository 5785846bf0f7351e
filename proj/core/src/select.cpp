#include "opinf/select.hpp"

#include "opinf/csv_io.hpp"
#include "opinf/errors.hpp"
#include "opinf/metrics.hpp"
#include "opinf/parallel.hpp"
#include "opinf/pod.hpp"

#include <cmath>
#include <sstream>

namespace opinf::select {

LambdaGrid build_grid(double lo, double hi, std::size_t m) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ArgumentError("select", "grid bounds must satisfy 0 < lo <= hi");
  }
  if (m < 2) {
    throw ArgumentError("select", "grid needs at least two points");
  }
  LambdaGrid grid{lo, hi, {}};
  grid.values.resize(m);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(m - 1);
    grid.values[k] = std::pow(10.0, a + t * (b - a));
  }
  grid.values.front() = lo;
  grid.values.back() = hi;
  return grid;
}

ErrorScore validation_error(const QuadraticModel& model, const std::vector<Trajectory>& held_out,
                            const Eigen::Ref<const Matrix>& V) {
  if (!model.A.allFinite() || !model.B.allFinite() || !model.F.allFinite() || !model.c.allFinite()) {
    return ErrorScore::diverged();
  }
  ErrorScore total;
  for (const auto& truth : held_out) {
    const Vector x0 = V.transpose() * truth.states.col(0);
    const Trajectory pred = dynamics::simulate(model, x0, truth.inputs, truth.dt);
    total += metrics::trajectory_error(V, pred, truth.states);
    if (total.is_diverged()) {
      break;
    }
  }
  return total;
}

std::string ValidationTable::to_csv() const {
  std::ostringstream os;
  os << "lambda";
  for (const double mu : params) {
    os << ",mu_" << csv::format_number(mu);
  }
  os << ",mean\n";
  auto cell = [](const ErrorScore& s) { return s.is_diverged() ? std::string("diverged") : csv::format_number(s.value()); };
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    os << csv::format_number(lambdas[i]);
    for (const auto& e : errors[i]) {
      os << ',' << cell(e);
    }
    os << ',' << cell(mean[i]) << '\n';
  }
  return os.str();
}

inference::RegressionData regression_data(const std::vector<Trajectory>& trajectories,
                                          const Eigen::Ref<const Matrix>& V, bool constant) {
  std::vector<Matrix> projected;
  std::vector<Matrix> inputs;
  double dt = 0.0;
  for (const auto& t : trajectories) {
    projected.push_back(pod::project_trajectory(t.states, V));
    inputs.push_back(t.inputs);
    if (dt != 0.0 && t.dt != dt) {
      throw ArgumentError("select", "training trajectories use different time steps");
    }
    dt = t.dt;
  }
  return inference::assemble(projected, inputs, dt, constant);
}

std::size_t choose_index(const std::vector<ErrorScore>& means) {
  std::size_t best = means.size();
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i].is_diverged()) {
      continue;
    }
    if (best == means.size() || means[i] <= means[best]) {
      best = i;
    }
  }
  if (best == means.size()) {
    throw SelectionError("select", "every regularization candidate diverged");
  }
  return best;
}

LambdaSelector::LambdaSelector(const TrainingBundle& bundle, inference::Method method)
    : bundle_(bundle), method_(method) {
  if (bundle.params.size() != bundle.trajectories.size()) {
    throw ArgumentError("select", "need trajectories for every training parameter");
  }
  problems_.reserve(bundle.params.size());
  for (const auto& trajs : bundle.trajectories) {
    problems_.emplace_back(regression_data(trajs, bundle.V, bundle.constant));
  }
}

interp::Structure LambdaSelector::structure() const {
  return method_ == inference::Method::spir ? interp::Structure::snd_linear : interp::Structure::plain;
}

interp::ModelFamily LambdaSelector::fit_family(double lambda) const {
  interp::ModelFamily family;
  family.structure = structure();
  family.params = bundle_.params;
  family.models.resize(problems_.size());
  for (std::size_t j = 0; j < problems_.size(); ++j) {
    family.models[j] = problems_[j].fit(method_, lambda, bundle_.epsilon, bundle_.spir).model;
  }
  return family;
}

ErrorScore LambdaSelector::cell(const interp::ModelFamily& family, std::size_t j) const {
  const interp::ModelFamily reduced = family.without(j);
  QuadraticModel model;
  try {
    model = interp::interpolate(reduced, bundle_.params[j], bundle_.epsilon);
  } catch (const DiagonalizabilityError&) {
    return ErrorScore::diverged();
  } catch (const StructureError&) {
    return ErrorScore::diverged();
  } catch (const NumericError&) {
    return ErrorScore::diverged();
  }
  return validation_error(model, bundle_.trajectories[j], bundle_.V);
}

SelectionResult LambdaSelector::run(const LambdaGrid& grid) const {
  const std::size_t M = bundle_.params.size();
  if (M < 3) {
    throw ArgumentError("select", "selection needs at least three training parameters");
  }
  const std::size_t m = grid.values.size();
  const std::size_t interior = M - 2;

  std::vector<interp::ModelFamily> families(m);
  parallel_for(m, [&](std::size_t i) { families[i] = fit_family(grid.values[i]); });

  ValidationTable table;
  table.lambdas = grid.values;
  table.params.assign(bundle_.params.begin() + 1, bundle_.params.end() - 1);
  table.errors.assign(m, std::vector<ErrorScore>(interior));
  parallel_for(m * interior, [&](std::size_t job) {
    const std::size_t i = job / interior;
    const std::size_t j = job % interior + 1;
    table.errors[i][j - 1] = cell(families[i], j);
  });

  table.mean.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    ErrorScore sum;
    for (const auto& e : table.errors[i]) {
      sum += e;
    }
    table.mean[i] = sum.scaled(1.0 / static_cast<double>(interior));
  }
  const std::size_t best = choose_index(table.mean);
  table.chosen = best;

  SelectionResult result;
  result.index = best;
  result.lambda = grid.values[best];
  result.table = std::move(table);
  result.family = std::move(families[best]);
  return result;
}

SelectionResult select_lambda(const TrainingBundle& bundle, const LambdaGrid& grid, inference::Method method) {
  return LambdaSelector(bundle, method).run(grid);
}

}  // namespace opinf::select
