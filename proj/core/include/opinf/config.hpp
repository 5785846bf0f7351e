#pragma once

#include "opinf/inference.hpp"
#include "opinf/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace opinf::config {

enum class Problem { synthetic, burgers, reaction_diffusion };

std::string_view to_string(Problem p);
Problem problem_from_string(std::string_view name);

/// How initial conditions are drawn.
enum class InitialKind {
  zero,      ///< x0 = 0
  uniform,   ///< entries of x0 i.i.d. U[lo, hi]
  reduced,   ///< x0 = V r with r in R^n, entries U[lo, hi]
  training,  ///< test only: reuse the i-th training initial condition
};

std::string_view to_string(InitialKind k);
InitialKind initial_kind_from_string(std::string_view name);

struct InitialSpec {
  InitialKind kind = InitialKind::zero;
  double lo = 0.0;
  double hi = 1.0;
};

struct InputRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct TrajectorySetSpec {
  Index count = 1;
  InputRange input;
  InitialSpec initial;
};

struct TestSpec {
  Index params = 7;       ///< equidistant in the parameter domain
  Index trajectories = 1; ///< per test parameter
  std::vector<InputRange> input_ranges;
  InitialSpec initial;
};

struct GridSpec {
  double lo = 1e-10;
  double hi = 1e10;
  std::size_t count = 51;
};

/// Method names accepted in the config, including the intrusive reference.
enum class MethodKind { plain, tikhonov, pir, spir, intrusive };

std::string_view to_string(MethodKind m);
MethodKind method_kind_from_string(std::string_view name);
/// Inference method of a non-intrusive MethodKind.
inference::Method inference_method(MethodKind m);

struct ExperimentConfig {
  std::string name;
  Problem problem = Problem::synthetic;
  Index N = 64;                 ///< synthetic, burgers
  double mesh_h = 1.0 / 12.0;   ///< reaction-diffusion
  double dt = 1e-3;
  Index steps = 1000;           ///< K
  std::vector<double> train_params;
  TrajectorySetSpec basis;
  TrajectorySetSpec training;
  TestSpec test;
  std::vector<Index> dims;
  GridSpec grid;
  std::vector<MethodKind> methods;
  double epsilon = 1e-10;
  std::uint64_t seed = 0;
  std::optional<double> quadratic_scale;  ///< synthetic only
  bool constant = false;                  ///< infer a constant term c
  inference::SpirOptions spir;
  std::filesystem::path output = "runs/out";

  /// Throws ConfigError on violated invariants.
  void validate() const;
  [[nodiscard]] Index max_dim() const;
  [[nodiscard]] double mu_lo() const { return train_params.front(); }
  [[nodiscard]] double mu_hi() const { return train_params.back(); }
  /// Equidistant test parameters including both endpoints.
  [[nodiscard]] std::vector<double> test_params() const;
};

/// Parses JSON text. Unknown keys raise ConfigError.
ExperimentConfig parse(const std::string& json_text);
ExperimentConfig load(const std::filesystem::path& path);
/// Canonical JSON (sorted keys, fixed number formatting).
std::string to_json(const ExperimentConfig& cfg);

/// Built-in experiments at desk scale.
ExperimentConfig preset(std::string_view experiment);
std::vector<std::string> preset_names();

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace opinf::config
