#include "opinf/config.hpp"
#include "opinf/csv_io.hpp"
#include "opinf/errors.hpp"
#include "opinf/experiment.hpp"
#include "opinf/select.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace opinf;
using config::ExperimentConfig;
using config::MethodKind;

struct Flags {
  std::string config_path;
  std::string method = "pir";
  long long dim = 0;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> mu;
  std::string family;
  std::string basis;
  std::string experiment;
  bool quiet = false;
};

ExperimentConfig resolve_config(const Flags& f, std::string_view fallback_preset) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    cfg = config::load(f.config_path);
  } else if (!fallback_preset.empty()) {
    cfg = config::preset(fallback_preset);
  } else {
    throw ConfigError("cli", "--config is required");
  }
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.output = f.out;
  cfg.validate();
  return cfg;
}

Index resolve_dim(const Flags& f, const ExperimentConfig& cfg) {
  const Index n = f.dim > 0 ? static_cast<Index>(f.dim) : cfg.max_dim();
  if (n > cfg.max_dim()) {
    throw ConfigError("cli", "--dim exceeds the largest configured dimension");
  }
  return n;
}

Matrix load_basis(const Flags& f, const ExperimentConfig& cfg) {
  const std::filesystem::path path = f.basis.empty() ? cfg.output / "basis.csv" : std::filesystem::path(f.basis);
  if (!std::filesystem::exists(path)) {
    throw ConfigError("cli", "basis file '" + path.string() + "' not found (run 'basis' first or pass --basis)");
  }
  return csv::read_matrix(path);
}

int cmd_simulate(const Flags& f) {
  const auto cfg = resolve_config(f, "");
  const auto fom = experiment::make_fom(cfg);
  const double mu = f.mu.value_or(cfg.mu_lo());
  if (mu < fom.mu_lo || mu > fom.mu_hi) {
    throw ArgumentError("fom", "parameter outside the problem domain");
  }
  const Matrix U = fom::sample_signal(
      {cfg.training.input.lo, cfg.training.input.hi, fom.p, cfg.steps,
       fom::derive_seed(cfg.seed, {static_cast<std::uint64_t>(experiment::Stream::train_input), 0, 0})});
  config::InitialSpec ic = cfg.basis.initial;
  const Vector x0 = experiment::initial_condition(cfg, ic, experiment::Stream::basis_initial, 0, 0, Matrix(fom.N, 0), fom.N);
  const Trajectory traj = dynamics::simulate(fom.at(mu), x0, U, cfg.dt);
  csv::write_trajectory(cfg.output / "trajectory.csv", traj);
  std::cout << "wrote " << (cfg.output / "trajectory.csv").string() << (traj.diverged ? " (diverged)" : "") << '\n';
  return traj.diverged ? 1 : 0;
}

int cmd_basis(const Flags& f) {
  const auto cfg = resolve_config(f, "");
  const auto basis = experiment::build_basis(cfg, experiment::make_fom(cfg));
  csv::write_matrix(cfg.output / "basis.csv", basis.V);
  csv::write_matrix(cfg.output / "singular_values.csv", basis.singular_values);
  std::cout << "wrote basis of dimension " << basis.dim() << " to " << cfg.output.string() << '\n';
  return 0;
}

std::filesystem::path family_dir(const ExperimentConfig& cfg, MethodKind m, Index n) {
  return cfg.output / "models" / std::string(config::to_string(m)) / ("n" + std::to_string(n));
}

int cmd_learn(const Flags& f) {
  const auto cfg = resolve_config(f, "");
  const MethodKind method = config::method_kind_from_string(f.method);
  const Index n = resolve_dim(f, cfg);
  const Matrix V = load_basis(f, cfg);
  const Matrix Vn = V.leftCols(n);
  const auto fom = experiment::make_fom(cfg);
  interp::ModelFamily family;
  std::optional<double> lambda;
  if (method == MethodKind::intrusive) {
    family = experiment::intrusive_family(cfg, fom, Vn);
  } else {
    if (method != MethodKind::plain) {
      if (!f.lambda) throw ConfigError("cli", "--lambda is required for regularized methods");
      lambda = *f.lambda;
    }
    const auto training = experiment::training_trajectories(cfg, fom, V, n);
    family = experiment::learn_family(cfg, training, Vn, method, lambda.value_or(0.0));
  }
  const auto dir = family_dir(cfg, method, n);
  experiment::write_family(dir, family, method, lambda);
  std::cout << "wrote " << family.models.size() << " models to " << dir.string() << '\n';
  return 0;
}

int cmd_select(const Flags& f) {
  const auto cfg = resolve_config(f, "");
  const MethodKind method = config::method_kind_from_string(f.method);
  if (method == MethodKind::plain || method == MethodKind::intrusive) {
    throw ConfigError("cli", "select needs a regularized method (tikhonov, pir, spir)");
  }
  const Index n = resolve_dim(f, cfg);
  const Matrix V = load_basis(f, cfg);
  const Matrix Vn = V.leftCols(n);
  const auto training = experiment::training_trajectories(cfg, experiment::make_fom(cfg), V, n);
  select::TrainingBundle bundle{cfg.train_params, training, Vn, cfg.constant, cfg.epsilon, cfg.spir};
  const auto grid = select::build_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.count);
  const auto sel = select::select_lambda(bundle, grid, config::inference_method(method));
  const std::string stem = std::string(config::to_string(method)) + "_n" + std::to_string(n);
  csv::write_text(cfg.output / "validation" / (stem + ".csv"), sel.table.to_csv());
  experiment::write_family(family_dir(cfg, method, n), sel.family, method, sel.lambda);
  std::cout << "lambda* = " << csv::format_number(sel.lambda) << '\n';
  return 0;
}

int cmd_evaluate(const Flags& f) {
  const auto cfg = resolve_config(f, "");
  const MethodKind method = config::method_kind_from_string(f.method);
  const Index n = resolve_dim(f, cfg);
  const Matrix V = load_basis(f, cfg);
  const Matrix Vn = V.leftCols(n);
  const auto fom = experiment::make_fom(cfg);
  const std::filesystem::path dir = f.family.empty() ? family_dir(cfg, method, n) : std::filesystem::path(f.family);
  if (!std::filesystem::exists(dir / "family.json")) {
    throw ConfigError("cli", "no model family at '" + dir.string() + "'");
  }
  const auto family = experiment::read_family(dir);
  if (family.models.front().dim() != n) {
    throw ConfigError("cli", "family dimension does not match --dim");
  }
  std::ostringstream csvout;
  if (f.mu) {
    // single parameter: write the reduced model used there
    const auto model = experiment::model_at(cfg, fom, family, Vn, method, *f.mu);
    csv::write_model(cfg.output / "evaluate" / "model", model);
    std::cout << "wrote model at mu=" << csv::format_number(*f.mu) << '\n';
    return 0;
  }
  csvout << "range,e_train,e_test\n";
  const auto training = experiment::training_trajectories(cfg, fom, V, n);
  const ErrorScore e_train = experiment::evaluate(cfg, fom, family, Vn, method, cfg.train_params, training);
  auto fmt = [](const ErrorScore& e) { return e.is_diverged() ? std::string("diverged") : csv::format_number(e.value()); };
  for (std::size_t r = 0; r < cfg.test.input_ranges.size(); ++r) {
    const auto tests = experiment::test_trajectories(cfg, fom, V, n, r);
    const ErrorScore e_test = experiment::evaluate(cfg, fom, family, Vn, method, cfg.test_params(), tests);
    csvout << r + 1 << ',' << fmt(e_train) << ',' << fmt(e_test) << '\n';
  }
  csv::write_text(cfg.output / "evaluate" / "errors.csv", csvout.str());
  std::cout << csvout.str();
  return 0;
}

int cmd_reproduce(const Flags& f) {
  const auto names = config::preset_names();
  if (f.config_path.empty() && std::find(names.begin(), names.end(), f.experiment) == names.end()) {
    throw ConfigError("cli", "unknown experiment '" + f.experiment + "'");
  }
  Flags g = f;
  ExperimentConfig cfg = resolve_config(g, f.experiment);
  if (f.out.empty() && f.config_path.empty()) {
    cfg.output = "runs/" + f.experiment;
  }
  experiment::RunOptions options;
  if (!f.quiet) {
    options.log = [](const std::string& line) { std::cerr << line << '\n'; };
  }
  const auto result = experiment::run_experiment(cfg, options);
  for (std::size_t r = 0; r < result.summaries.size(); ++r) {
    std::cout << metrics::summary_csv(result.summaries[r]);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator inference with physics-informed regularization"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Override the base seed");
    sub->add_option("--out", f.out, "Output directory");
  };
  auto add_method = [&f](CLI::App* sub) {
    sub->add_option("--method", f.method, "plain|tikhonov|pir|spir|intrusive");
    sub->add_option("--dim", f.dim, "Reduced dimension n");
    sub->add_option("--basis", f.basis, "basis.csv (default OUT/basis.csv)");
  };

  auto* sim = app.add_subcommand("simulate", "Simulate the full model at one parameter");
  add_common(sim);
  sim->add_option("--mu", f.mu, "Parameter value");
  auto* bas = app.add_subcommand("basis", "Build the POD basis");
  add_common(bas);
  auto* lrn = app.add_subcommand("learn", "Fit a model family at a fixed lambda");
  add_common(lrn);
  add_method(lrn);
  lrn->add_option("--lambda", f.lambda, "Regularization weight");
  auto* sel = app.add_subcommand("select", "Leave-one-out lambda selection");
  add_common(sel);
  add_method(sel);
  auto* evl = app.add_subcommand("evaluate", "Training and test errors of a stored family");
  add_common(evl);
  add_method(evl);
  evl->add_option("--family", f.family, "Family directory");
  evl->add_option("--mu", f.mu, "Write the reduced model at this parameter instead");
  auto* rep = app.add_subcommand("reproduce", "Run a full experiment");
  rep->add_option("experiment", f.experiment, "synthetic|burgers|reaction_diffusion")->required();
  add_common(rep);
  rep->add_flag("--quiet", f.quiet, "No progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sim) return cmd_simulate(f);
    if (*bas) return cmd_basis(f);
    if (*lrn) return cmd_learn(f);
    if (*sel) return cmd_select(f);
    if (*evl) return cmd_evaluate(f);
    if (*rep) return cmd_reproduce(f);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: harness: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
