#pragma once

#include "opinf/config.hpp"
#include "opinf/dynamics.hpp"
#include "opinf/fom.hpp"
#include "opinf/interp.hpp"
#include "opinf/metrics.hpp"
#include "opinf/pod.hpp"
#include "opinf/select.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace opinf::experiment {

/// Library version string.
std::string_view version();

/// Stream tags for derive_seed, one per kind of random draw.
enum class Stream : std::uint64_t {
  basis_input = 1,
  basis_initial = 2,
  train_input = 3,
  train_initial = 4,
  test_input = 5,
  test_initial = 6,
  problem = 7,
};

fom::FomFamily make_fom(const config::ExperimentConfig& cfg);

/// Basis trajectories at every training parameter, [parameter][trajectory].
std::vector<std::vector<Trajectory>> basis_trajectories(const config::ExperimentConfig& cfg,
                                                        const fom::FomFamily& fom);

/// POD basis of dimension max(dims) from the basis trajectories.
pod::PodBasis build_basis(const config::ExperimentConfig& cfg, const fom::FomFamily& fom);

/// Initial condition for trajectory i of a set. Uniform draws are keyed by
/// (stream, parameter index, i); reduced draws r are keyed by (stream, i)
/// only, so every parameter shares r_i and test sets can reuse them.
Vector initial_condition(const config::ExperimentConfig& cfg, const config::InitialSpec& spec, Stream stream,
                         std::size_t param_index, std::size_t i, const Eigen::Ref<const Matrix>& V, Index N);

/// Training trajectories at every training parameter for reduced dimension n
/// (V has at least n columns; only reduced initial conditions depend on n).
std::vector<std::vector<Trajectory>> training_trajectories(const config::ExperimentConfig& cfg,
                                                           const fom::FomFamily& fom,
                                                           const Eigen::Ref<const Matrix>& V, Index n);

/// Test trajectories at the test parameters for one input range.
std::vector<std::vector<Trajectory>> test_trajectories(const config::ExperimentConfig& cfg, const fom::FomFamily& fom,
                                                       const Eigen::Ref<const Matrix>& V, Index n,
                                                       std::size_t range_index);

/// Family of node models for a non-intrusive method at a fixed lambda
/// (ignored for plain).
interp::ModelFamily learn_family(const config::ExperimentConfig& cfg,
                                 const std::vector<std::vector<Trajectory>>& training,
                                 const Eigen::Ref<const Matrix>& Vn, config::MethodKind method, double lambda);

/// Galerkin models at the training parameters.
interp::ModelFamily intrusive_family(const config::ExperimentConfig& cfg, const fom::FomFamily& fom,
                                     const Eigen::Ref<const Matrix>& Vn);

/// Reduced model used at parameter mu. Intrusive families are re-reduced from
/// the full model at mu; learned families are interpolated.
QuadraticModel model_at(const config::ExperimentConfig& cfg, const fom::FomFamily& fom,
                        const interp::ModelFamily& family, const Eigen::Ref<const Matrix>& Vn,
                        config::MethodKind method, double mu);

/// Sum of relative errors of reduced simulations against full trajectories
/// at each parameter. Interpolation failures count as divergence.
ErrorScore evaluate(const config::ExperimentConfig& cfg, const fom::FomFamily& fom,
                    const interp::ModelFamily& family, const Eigen::Ref<const Matrix>& Vn,
                    config::MethodKind method, const std::vector<double>& params,
                    const std::vector<std::vector<Trajectory>>& truths);

/// Smallest stability radius over the node models as used for prediction
/// (learned families after eigenvalue reflection). Empty if a node is not
/// Hurwitz or the Lyapunov solve fails.
std::optional<stability::Radius> family_radius(const interp::ModelFamily& family, config::MethodKind method,
                                               double epsilon);

/// Persisted family: family.json (params, structure, method, lambda) plus
/// node_<j>/{A,B,F,c}.csv.
void write_family(const std::filesystem::path& dir, const interp::ModelFamily& family, config::MethodKind method,
                  std::optional<double> lambda);
interp::ModelFamily read_family(const std::filesystem::path& dir);

struct RunOptions {
  bool write_artifacts = true;
  std::function<void(const std::string&)> log;  ///< progress lines, may be empty
};

struct ExperimentResult {
  std::vector<metrics::ErrorSummary> summaries;  ///< one per test input range
  pod::PodBasis basis;
  /// Per (method, n) selection outcome, in summary row order.
  std::vector<std::optional<select::ValidationTable>> tables;
  std::vector<std::string> failures;  ///< module-tagged messages of failed methods
};

/// Full pipeline. Writes manifest.json, basis.csv, singular_values.csv,
/// validation/<method>_n<n>.csv, models/<method>/n<n>/..., and summary.csv
/// (or summary_<k>.csv for k test ranges) into cfg.output.
ExperimentResult run_experiment(const config::ExperimentConfig& cfg, const RunOptions& options = {});

}  // namespace opinf::experiment
