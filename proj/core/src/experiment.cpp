#include "opinf/experiment.hpp"

#include "opinf/csv_io.hpp"
#include "opinf/errors.hpp"
#include "opinf/parallel.hpp"
#include "opinf/stability.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef OPINF_VERSION_STRING
#define OPINF_VERSION_STRING "0.0.0"
#endif

namespace opinf::experiment {

using config::ExperimentConfig;
using config::InitialKind;
using config::MethodKind;
using nlohmann::json;

namespace {

std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

Matrix draw_input(const ExperimentConfig& cfg, const config::InputRange& range, Index p, std::uint64_t seed) {
  return fom::sample_signal({range.lo, range.hi, p, cfg.steps, seed});
}

Trajectory simulate_fom(const QuadraticModel& model, const Vector& x0, const Matrix& inputs, double dt,
                        std::string_view what) {
  Trajectory t = dynamics::simulate(model, x0, inputs, dt);
  if (t.diverged) {
    throw NumericError("fom", std::string("full model diverged while generating ") + std::string(what));
  }
  return t;
}

void emit(const RunOptions& options, const std::string& line) {
  if (options.log) {
    options.log(line);
  }
}

std::string number_tag(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view version() { return OPINF_VERSION_STRING; }

fom::FomFamily make_fom(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case config::Problem::synthetic: {
      const double scale = cfg.quadratic_scale.value_or(fom::default_synthetic_quadratic_scale(cfg.N));
      return fom::build_synthetic(cfg.N, fom::derive_seed(cfg.seed, {tag(Stream::problem)}), scale);
    }
    case config::Problem::burgers:
      return fom::burgers_family(cfg.N);
    case config::Problem::reaction_diffusion:
      return fom::reaction_diffusion_family(cfg.mesh_h);
  }
  throw ConfigError("harness", "unknown problem");
}

Vector initial_condition(const ExperimentConfig& cfg, const config::InitialSpec& spec, Stream stream,
                         std::size_t param_index, std::size_t i, const Eigen::Ref<const Matrix>& V, Index N) {
  switch (spec.kind) {
    case InitialKind::zero:
      return Vector::Zero(N);
    case InitialKind::uniform: {
      const auto seed = fom::derive_seed(cfg.seed, {tag(stream), param_index, i});
      return fom::sample_signal({spec.lo, spec.hi, N, 1, seed}).col(0);
    }
    case InitialKind::reduced: {
      // r is drawn at full max_dim length; leading entries are stable across n
      const auto seed = fom::derive_seed(cfg.seed, {tag(stream), i});
      const Vector r = fom::sample_signal({spec.lo, spec.hi, cfg.max_dim(), 1, seed}).col(0);
      return V * r.head(V.cols());
    }
    case InitialKind::training:
      return initial_condition(cfg, cfg.training.initial, Stream::train_initial, param_index, i, V, N);
  }
  throw ConfigError("harness", "unknown initial condition kind");
}

std::vector<std::vector<Trajectory>> basis_trajectories(const ExperimentConfig& cfg, const fom::FomFamily& fom) {
  const std::size_t M = cfg.train_params.size();
  std::vector<std::vector<Trajectory>> out(M);
  const Matrix none(fom.N, 0);
  parallel_for(M, [&](std::size_t j) {
    const QuadraticModel model = fom.at(cfg.train_params[j]);
    for (Index b = 0; b < cfg.basis.count; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      const Matrix U = draw_input(cfg, cfg.basis.input, fom.p,
                                  fom::derive_seed(cfg.seed, {tag(Stream::basis_input), j, bi}));
      const Vector x0 = initial_condition(cfg, cfg.basis.initial, Stream::basis_initial, j, bi, none, fom.N);
      out[j].push_back(simulate_fom(model, x0, U, cfg.dt, "basis trajectories"));
    }
  });
  return out;
}

pod::PodBasis build_basis(const ExperimentConfig& cfg, const fom::FomFamily& fom) {
  const auto trajs = basis_trajectories(cfg, fom);
  std::vector<Matrix> snaps;
  for (const auto& per : trajs) {
    for (const auto& t : per) {
      snaps.push_back(t.states);
    }
  }
  return pod::pod_basis(pod::assemble_snapshots(snaps), cfg.max_dim());
}

std::vector<std::vector<Trajectory>> training_trajectories(const ExperimentConfig& cfg, const fom::FomFamily& fom,
                                                           const Eigen::Ref<const Matrix>& V, Index n) {
  const std::size_t M = cfg.train_params.size();
  const Matrix Vn = V.leftCols(n);
  std::vector<std::vector<Trajectory>> out(M);
  parallel_for(M, [&](std::size_t j) {
    const QuadraticModel model = fom.at(cfg.train_params[j]);
    for (Index i = 0; i < cfg.training.count; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const Matrix U = draw_input(cfg, cfg.training.input, fom.p,
                                  fom::derive_seed(cfg.seed, {tag(Stream::train_input), j, ii}));
      const Vector x0 = initial_condition(cfg, cfg.training.initial, Stream::train_initial, j, ii, Vn, fom.N);
      out[j].push_back(simulate_fom(model, x0, U, cfg.dt, "training trajectories"));
    }
  });
  return out;
}

std::vector<std::vector<Trajectory>> test_trajectories(const ExperimentConfig& cfg, const fom::FomFamily& fom,
                                                       const Eigen::Ref<const Matrix>& V, Index n,
                                                       std::size_t range_index) {
  const auto params = cfg.test_params();
  const Matrix Vn = V.leftCols(n);
  const auto& range = cfg.test.input_ranges.at(range_index);
  std::vector<std::vector<Trajectory>> out(params.size());
  parallel_for(params.size(), [&](std::size_t t) {
    const QuadraticModel model = fom.at(params[t]);
    for (Index i = 0; i < cfg.test.trajectories; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const Matrix U = draw_input(cfg, range, fom.p,
                                  fom::derive_seed(cfg.seed, {tag(Stream::test_input), range_index, t, ii}));
      const Vector x0 = initial_condition(cfg, cfg.test.initial, Stream::test_initial, t, ii, Vn, fom.N);
      out[t].push_back(simulate_fom(model, x0, U, cfg.dt, "test trajectories"));
    }
  });
  return out;
}

interp::ModelFamily learn_family(const ExperimentConfig& cfg, const std::vector<std::vector<Trajectory>>& training,
                                 const Eigen::Ref<const Matrix>& Vn, MethodKind method, double lambda) {
  select::TrainingBundle bundle{cfg.train_params, training, Vn, cfg.constant, cfg.epsilon, cfg.spir};
  return select::LambdaSelector(bundle, config::inference_method(method)).fit_family(lambda);
}

interp::ModelFamily intrusive_family(const ExperimentConfig& cfg, const fom::FomFamily& fom,
                                     const Eigen::Ref<const Matrix>& Vn) {
  interp::ModelFamily family;
  family.params = cfg.train_params;
  family.models.resize(cfg.train_params.size());
  parallel_for(family.models.size(),
               [&](std::size_t j) { family.models[j] = pod::galerkin_reduce(fom.at(cfg.train_params[j]), Vn); });
  return family;
}

QuadraticModel model_at(const ExperimentConfig& cfg, const fom::FomFamily& fom, const interp::ModelFamily& family,
                        const Eigen::Ref<const Matrix>& Vn, MethodKind method, double mu) {
  if (method == MethodKind::intrusive) {
    return pod::galerkin_reduce(fom.at(mu), Vn);
  }
  return interp::interpolate(family, mu, cfg.epsilon);
}

ErrorScore evaluate(const ExperimentConfig& cfg, const fom::FomFamily& fom, const interp::ModelFamily& family,
                    const Eigen::Ref<const Matrix>& Vn, MethodKind method, const std::vector<double>& params,
                    const std::vector<std::vector<Trajectory>>& truths) {
  std::vector<ErrorScore> per(params.size());
  parallel_for(params.size(), [&](std::size_t t) {
    QuadraticModel model;
    try {
      model = model_at(cfg, fom, family, Vn, method, params[t]);
    } catch (const DiagonalizabilityError&) {
      per[t] = ErrorScore::diverged();
      return;
    } catch (const StructureError&) {
      per[t] = ErrorScore::diverged();
      return;
    }
    per[t] = select::validation_error(model, truths[t], Vn);
  });
  ErrorScore total;
  for (const auto& e : per) {
    total += e;
  }
  return total;
}

std::optional<stability::Radius> family_radius(const interp::ModelFamily& family, MethodKind method, double epsilon) {
  std::optional<stability::Radius> best;
  for (const auto& node : family.models) {
    QuadraticModel m = node;
    try {
      if (method != MethodKind::intrusive && method != MethodKind::spir) {
        m.A = stability::reflect_eigenvalues(m.A, epsilon);
      }
      const auto report = stability::stability_radius(m);
      if (!report.hurwitz) {
        return std::nullopt;
      }
      if (!best || report.rho < *best) {
        best = report.rho;
      }
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return best;
}

void write_family(const std::filesystem::path& dir, const interp::ModelFamily& family, MethodKind method,
                  std::optional<double> lambda) {
  std::filesystem::create_directories(dir);
  json j;
  j["method"] = std::string(config::to_string(method));
  j["structure"] = std::string(interp::to_string(family.structure));
  j["params"] = family.params;
  j["lambda"] = lambda ? json(*lambda) : json(nullptr);
  csv::write_text(dir / "family.json", j.dump(2) + "\n");
  for (std::size_t k = 0; k < family.models.size(); ++k) {
    csv::write_model(dir / ("node_" + std::to_string(k)), family.models[k]);
  }
}

interp::ModelFamily read_family(const std::filesystem::path& dir) {
  json j;
  try {
    j = json::parse(csv::read_text(dir / "family.json"));
  } catch (const json::exception& e) {
    throw ConfigError("harness", "bad family.json in " + dir.string() + ": " + e.what());
  }
  interp::ModelFamily family;
  family.params = j.at("params").get<std::vector<double>>();
  family.structure = j.value("structure", std::string("plain")) == "snd_linear" ? interp::Structure::snd_linear
                                                                                 : interp::Structure::plain;
  for (std::size_t k = 0; k < family.params.size(); ++k) {
    family.models.push_back(csv::read_model(dir / ("node_" + std::to_string(k))));
  }
  family.validate();
  return family;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const auto out = cfg.output;
  const bool write = options.write_artifacts;
  if (write) {
    std::filesystem::create_directories(out);
  }

  const fom::FomFamily fom = make_fom(cfg);
  ExperimentResult result;
  emit(options, "basis: simulating " + std::to_string(cfg.train_params.size() * cfg.basis.count) + " trajectories");
  result.basis = build_basis(cfg, fom);
  if (write) {
    csv::write_matrix(out / "basis.csv", result.basis.V);
    csv::write_matrix(out / "singular_values.csv", result.basis.singular_values);
  }

  const auto test_params = cfg.test_params();
  const std::size_t ranges = cfg.test.input_ranges.size();
  result.summaries.resize(ranges);
  const bool reduced_ic = cfg.training.initial.kind == InitialKind::reduced;

  std::vector<std::vector<Trajectory>> training;
  std::vector<std::vector<std::vector<Trajectory>>> tests(ranges);
  for (const Index n : cfg.dims) {
    const Matrix Vn = result.basis.V.leftCols(n);
    if (reduced_ic || training.empty()) {
      training = training_trajectories(cfg, fom, result.basis.V, n);
      for (std::size_t r = 0; r < ranges; ++r) {
        tests[r] = test_trajectories(cfg, fom, result.basis.V, n, r);
      }
    }

    for (const MethodKind method : cfg.methods) {
      const std::string mname(config::to_string(method));
      std::vector<metrics::SummaryRow> rows(ranges);
      for (auto& row : rows) {
        row.method = mname;
        row.n = n;
      }
      std::optional<select::ValidationTable> table;
      try {
        interp::ModelFamily family;
        std::optional<double> lambda;
        if (method == MethodKind::intrusive) {
          family = intrusive_family(cfg, fom, Vn);
        } else if (method == MethodKind::plain) {
          family = learn_family(cfg, training, Vn, method, 0.0);
        } else {
          select::TrainingBundle bundle{cfg.train_params, training, Vn, cfg.constant, cfg.epsilon, cfg.spir};
          const auto grid = select::build_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.count);
          auto sel = select::select_lambda(bundle, grid, config::inference_method(method));
          lambda = sel.lambda;
          family = std::move(sel.family);
          table = std::move(sel.table);
          if (write) {
            csv::write_text(out / "validation" / (mname + "_n" + std::to_string(n) + ".csv"), table->to_csv());
          }
        }
        if (write) {
          write_family(out / "models" / mname / ("n" + std::to_string(n)), family, method, lambda);
        }

        const ErrorScore e_train = evaluate(cfg, fom, family, Vn, method, cfg.train_params, training);
        const auto rho = family_radius(family, method, cfg.epsilon);
        for (std::size_t r = 0; r < ranges; ++r) {
          rows[r].lambda = lambda;
          rows[r].e_train = e_train;
          rows[r].e_test = evaluate(cfg, fom, family, Vn, method, test_params, tests[r]);
          rows[r].rho = rho;
          rows[r].diverged = rows[r].e_test.is_diverged() || e_train.is_diverged();
        }
        std::string line = mname + " n=" + std::to_string(n);
        if (lambda) line += " lambda=" + number_tag(*lambda);
        line += " e_test=" + (rows[0].e_test.is_diverged() ? std::string("diverged") : number_tag(rows[0].e_test.value()));
        emit(options, line);
      } catch (const Error& e) {
        // a failing method must not disturb the others
        result.failures.push_back(mname + " n=" + std::to_string(n) + ": " + e.what());
        emit(options, result.failures.back());
        for (auto& row : rows) {
          row.e_train = ErrorScore::diverged();
          row.e_test = ErrorScore::diverged();
          row.rho.reset();
          row.diverged = true;
        }
      }
      for (std::size_t r = 0; r < ranges; ++r) {
        result.summaries[r].rows.push_back(rows[r]);
      }
      result.tables.push_back(std::move(table));
    }
  }

  if (write) {
    std::vector<std::string> files = {"basis.csv", "singular_values.csv"};
    for (std::size_t r = 0; r < ranges; ++r) {
      const std::string name = ranges == 1 ? "summary.csv" : "summary_" + std::to_string(r + 1) + ".csv";
      csv::write_text(out / name, metrics::summary_csv(result.summaries[r]));
      files.push_back(name);
    }
    const std::string canonical = config::to_json(cfg);
    // the hash ignores where the run was written
    config::ExperimentConfig located = cfg;
    located.output.clear();
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(config::fnv1a(config::to_json(located))));
    json manifest;
    manifest["config_hash"] = hash;
    manifest["config"] = json::parse(canonical);
    manifest["seed"] = cfg.seed;
    manifest["version"] = std::string(version());
    manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
    manifest["threads_capped_by"] = "OPINF_THREADS";
    manifest["summaries"] = std::vector<std::string>(files.begin() + 2, files.end());
    manifest["failures"] = result.failures;
    csv::write_text(out / "manifest.json", manifest.dump(2) + "\n");
  }
  return result;
}

}  // namespace opinf::experiment
