#include "helpers.hpp"
#include "opinf/config.hpp"
#include "opinf/csv_io.hpp"
#include "opinf/errors.hpp"
#include "opinf/experiment.hpp"
#include "opinf/parallel.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

using namespace opinf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("opinf_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

config::ExperimentConfig tiny(const fs::path& out) {
  auto c = config::preset("synthetic");
  c.N = 16;
  c.steps = 150;
  c.train_params = {0.1, 0.4, 0.7, 1.0};
  c.training.count = 2;
  c.test.params = 3;
  c.dims = {2, 3};
  c.grid = {1e-8, 1e2, 6};
  c.methods = {config::MethodKind::plain, config::MethodKind::pir, config::MethodKind::intrusive};
  c.output = out;
  return c;
}

}  // namespace

TEST(Config, PresetsValidate) {
  for (const auto& name : config::preset_names()) {
    EXPECT_NO_THROW(config::preset(name).validate()) << name;
  }
  EXPECT_THROW(config::preset("navier"), ConfigError);
  const auto b = config::preset("burgers");
  EXPECT_EQ(b.training.count, 10);
  EXPECT_EQ(b.test.trajectories, 5);
  EXPECT_EQ(b.test.input_ranges.size(), 3u);
}

TEST(Config, JsonRoundTrip) {
  const auto c = config::preset("reaction_diffusion");
  const std::string text = config::to_json(c);
  const auto back = config::parse(text);
  EXPECT_EQ(config::to_json(back), text);
  EXPECT_EQ(config::fnv1a(text), config::fnv1a(config::to_json(back)));
}

TEST(Config, Rejections) {
  EXPECT_THROW(config::parse("{not json"), ConfigError);
  EXPECT_THROW(config::parse(R"({"problem":"synthetic","bogus":1})"), ConfigError);
  const std::string base = config::to_json(config::preset("synthetic"));
  auto with = [&](const std::string& key, const std::string& value) {
    auto j = base;
    const auto pos = j.find("\"" + key + "\"");
    const auto colon = j.find(':', pos);
    const auto end = j.find_first_of(",\n", colon);
    j.replace(colon + 1, end - colon - 1, value);
    return j;
  };
  EXPECT_THROW(config::parse(with("dt", "-1")), ConfigError);
  EXPECT_THROW(config::parse(with("epsilon", "0")), ConfigError);
  EXPECT_THROW(config::parse(with("steps", "0")), ConfigError);
  EXPECT_NO_THROW(config::parse(with("steps", "10")));
}

TEST(Config, Fnv) {
  EXPECT_EQ(config::fnv1a(""), 14695981039346656037ULL);
  EXPECT_EQ(config::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(CsvIo, NumbersRoundTrip) {
  for (const double v : {0.1, -3.25e-200, 1.0 / 3.0, 6.02e23}) {
    EXPECT_EQ(csv::parse_number(csv::format_number(v)), v);
  }
  EXPECT_EQ(csv::format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isnan(csv::parse_number("nan")));
  EXPECT_THROW(csv::parse_number("1.5x"), ConfigError);
}

TEST(CsvIo, MatrixTrajectoryModel) {
  const auto dir = scratch("csv");
  std::mt19937_64 rng(1);
  const Matrix M = testutil::random_matrix(3, 4, rng);
  csv::write_matrix(dir / "m.csv", M);
  EXPECT_EQ(csv::read_matrix(dir / "m.csv"), M);

  auto model = testutil::random_stable_model(3, 2, rng);
  model.c = Vector::Random(3);
  const auto traj = dynamics::simulate(model, Vector::Ones(3), testutil::random_matrix(2, 5, rng), 0.01);
  csv::write_trajectory(dir / "t.csv", traj);
  const auto back = csv::read_trajectory(dir / "t.csv");
  EXPECT_EQ(back.states, traj.states);
  EXPECT_EQ(back.inputs, traj.inputs);
  EXPECT_DOUBLE_EQ(back.dt, traj.dt);

  csv::write_model(dir / "model", model);
  const auto m2 = csv::read_model(dir / "model");
  EXPECT_EQ(m2.A, model.A);
  EXPECT_EQ(m2.F, model.F);
  EXPECT_EQ(m2.c, model.c);
  EXPECT_THROW(csv::read_matrix(dir / "missing.csv"), ConfigError);
}

TEST(Parallel, RunsEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
  EXPECT_THROW(parallel_for(10,
                            [](std::size_t i) {
                              if (i == 7) throw NumericError("test", "boom");
                            }),
               NumericError);
  ::setenv("OPINF_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::unsetenv("OPINF_THREADS");
}

TEST(Harness, InitialConditionsShareReducedDraws) {
  auto c = config::preset("burgers");
  const Matrix V = Matrix::Identity(64, 10);
  const Vector a = experiment::initial_condition(c, c.training.initial, experiment::Stream::train_initial, 0, 3,
                                                 V.leftCols(4), 64);
  const Vector b = experiment::initial_condition(c, c.training.initial, experiment::Stream::train_initial, 5, 3,
                                                 V.leftCols(6), 64);
  EXPECT_EQ(a.head(4), b.head(4));
  const Vector t = experiment::initial_condition(c, c.test.initial, experiment::Stream::test_initial, 2, 3,
                                                 V.leftCols(4), 64);
  EXPECT_EQ(t, a);
  EXPECT_GE(a.minCoeff(), 0.0);
  EXPECT_LE(a.maxCoeff(), 1.0);
}

TEST(Harness, RunIsDeterministicAndWritesArtifacts) {
  const auto d1 = scratch("run1");
  const auto d2 = scratch("run2");
  experiment::run_experiment(tiny(d1));
  auto c2 = tiny(d2);
  experiment::run_experiment(c2);
  for (const auto* f : {"summary.csv", "basis.csv", "singular_values.csv", "validation/pir_n2.csv",
                        "models/pir/n3/family.json", "models/plain/n2/node_0/A.csv"}) {
    ASSERT_TRUE(fs::exists(d1 / f)) << f;
    EXPECT_EQ(csv::read_text(d1 / f), csv::read_text(d2 / f)) << f;
  }
  const std::string m1 = csv::read_text(d1 / "manifest.json");
  EXPECT_NE(m1.find("config_hash"), std::string::npos);
  EXPECT_NE(m1.find("\"version\""), std::string::npos);
}

TEST(Harness, MethodsAreIsolated) {
  const auto d1 = scratch("iso1");
  const auto d2 = scratch("iso2");
  auto a = tiny(d1);
  auto b = tiny(d2);
  b.methods = {config::MethodKind::pir};
  const auto ra = experiment::run_experiment(a, {false, {}});
  const auto rb = experiment::run_experiment(b, {false, {}});
  std::vector<metrics::SummaryRow> pir_a;
  for (const auto& r : ra.summaries[0].rows) {
    if (r.method == "pir") pir_a.push_back(r);
  }
  ASSERT_EQ(pir_a.size(), rb.summaries[0].rows.size());
  for (std::size_t i = 0; i < pir_a.size(); ++i) {
    EXPECT_EQ(pir_a[i].e_test, rb.summaries[0].rows[i].e_test);
    EXPECT_EQ(pir_a[i].e_train, rb.summaries[0].rows[i].e_train);
    EXPECT_EQ(pir_a[i].lambda, rb.summaries[0].rows[i].lambda);
  }
}

TEST(Harness, FamilyPersistenceAndNodeReproduction) {
  const auto dir = scratch("family");
  auto c = tiny(dir);
  const auto fom = experiment::make_fom(c);
  const auto basis = experiment::build_basis(c, fom);
  const Matrix V2 = basis.V.leftCols(2);
  const auto training = experiment::training_trajectories(c, fom, basis.V, 2);
  const auto fam = experiment::learn_family(c, training, V2, config::MethodKind::pir, 1e-4);
  experiment::write_family(dir / "fam", fam, config::MethodKind::pir, 1e-4);
  const auto back = experiment::read_family(dir / "fam");
  ASSERT_EQ(back.models.size(), fam.models.size());
  for (std::size_t j = 0; j < fam.models.size(); ++j) {
    EXPECT_EQ(back.models[j].A, fam.models[j].A);
    EXPECT_EQ(back.models[j].F, fam.models[j].F);
    const auto at_node = experiment::model_at(c, fom, back, V2, config::MethodKind::pir, c.train_params[j]);
    const auto expected = interp::interpolate(fam, c.train_params[j], c.epsilon);
    EXPECT_EQ(at_node.A, expected.A);
  }
  // pir at lambda 0 equals plain
  const auto plain = experiment::learn_family(c, training, V2, config::MethodKind::plain, 0.0);
  const auto pir0 = experiment::learn_family(c, training, V2, config::MethodKind::pir, 0.0);
  for (std::size_t j = 0; j < plain.models.size(); ++j) {
    EXPECT_LE((plain.models[j].F - pir0.models[j].F).norm(), 1e-10 * std::max(1.0, plain.models[j].F.norm()));
  }
}
