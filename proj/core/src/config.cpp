#include "opinf/config.hpp"

#include "opinf/csv_io.hpp"
#include "opinf/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace opinf::config {

using nlohmann::json;

namespace {

template <typename E, std::size_t K>
E lookup(const std::array<std::pair<std::string_view, E>, K>& table, std::string_view name, std::string_view what) {
  for (const auto& [key, value] : table) {
    if (key == name) {
      return value;
    }
  }
  throw ConfigError("config", "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

template <typename E, std::size_t K>
std::string_view reverse(const std::array<std::pair<std::string_view, E>, K>& table, E value) {
  for (const auto& [key, v] : table) {
    if (v == value) {
      return key;
    }
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, Problem>, 3> kProblems{{
    {"synthetic", Problem::synthetic},
    {"burgers", Problem::burgers},
    {"reaction_diffusion", Problem::reaction_diffusion},
}};

constexpr std::array<std::pair<std::string_view, InitialKind>, 4> kInitials{{
    {"zero", InitialKind::zero},
    {"uniform", InitialKind::uniform},
    {"reduced", InitialKind::reduced},
    {"training", InitialKind::training},
}};

constexpr std::array<std::pair<std::string_view, MethodKind>, 5> kMethods{{
    {"plain", MethodKind::plain},
    {"tikhonov", MethodKind::tikhonov},
    {"pir", MethodKind::pir},
    {"spir", MethodKind::spir},
    {"intrusive", MethodKind::intrusive},
}};

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) {
    throw ConfigError("config", std::string(where) + " must be an object");
  }
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("config", "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config", std::string("bad value for '") + key + "'");
  }
}

InputRange parse_range(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("config", "input range must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json range_json(const InputRange& r) { return json::array({r.lo, r.hi}); }

InitialSpec parse_initial(const json& j) {
  if (j.is_string()) {
    return {initial_kind_from_string(j.get<std::string>()), 0.0, 1.0};
  }
  check_keys(j, {"kind", "range"}, "initial");
  InitialSpec s;
  s.kind = initial_kind_from_string(get<std::string>(j, "kind", "zero"));
  if (j.contains("range")) {
    const auto r = parse_range(j.at("range"));
    s.lo = r.lo;
    s.hi = r.hi;
  }
  return s;
}

json initial_json(const InitialSpec& s) {
  return json{{"kind", std::string(to_string(s.kind))}, {"range", json::array({s.lo, s.hi})}};
}

TrajectorySetSpec parse_set(const json& j, const char* where) {
  check_keys(j, {"trajectories", "input", "initial"}, where);
  TrajectorySetSpec s;
  s.count = get<Index>(j, "trajectories", 1);
  if (j.contains("input")) {
    s.input = parse_range(j.at("input"));
  }
  if (j.contains("initial")) {
    s.initial = parse_initial(j.at("initial"));
  }
  return s;
}

json set_json(const TrajectorySetSpec& s) {
  return json{{"trajectories", s.count}, {"input", range_json(s.input)}, {"initial", initial_json(s.initial)}};
}

std::vector<double> linspace(double lo, double hi, Index count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] =
        count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 1) {
    v.back() = hi;
  }
  return v;
}

}  // namespace

std::string_view to_string(Problem p) { return reverse(kProblems, p); }
Problem problem_from_string(std::string_view name) { return lookup(kProblems, name, "problem"); }
std::string_view to_string(InitialKind k) { return reverse(kInitials, k); }
InitialKind initial_kind_from_string(std::string_view name) { return lookup(kInitials, name, "initial kind"); }
std::string_view to_string(MethodKind m) { return reverse(kMethods, m); }
MethodKind method_kind_from_string(std::string_view name) { return lookup(kMethods, name, "method"); }

inference::Method inference_method(MethodKind m) {
  switch (m) {
    case MethodKind::plain: return inference::Method::plain;
    case MethodKind::tikhonov: return inference::Method::tikhonov;
    case MethodKind::pir: return inference::Method::pir;
    case MethodKind::spir: return inference::Method::spir;
    case MethodKind::intrusive: break;
  }
  throw ArgumentError("config", "intrusive is not an inference method");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("config", what); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (steps < 1) fail("steps must be >= 1");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (problem == Problem::reaction_diffusion) {
    if (!(mesh_h > 0.0) || std::abs(1.0 / mesh_h - std::round(1.0 / mesh_h)) > 1e-9 || std::round(1.0 / mesh_h) < 2) {
      fail("mesh_h must be 1/m for an integer m >= 2");
    }
  } else if (N < 3) {
    fail("N must be >= 3");
  }
  if (train_params.size() < 3) fail("need at least three training parameters");
  for (std::size_t i = 1; i < train_params.size(); ++i) {
    if (!(train_params[i] > train_params[i - 1])) fail("training parameters must be strictly increasing");
  }
  for (const auto* s : {&basis, &training}) {
    if (s->count < 1) fail("trajectory counts must be >= 1");
    if (s->input.lo > s->input.hi) fail("input range must satisfy lo <= hi");
    if (s->initial.kind == InitialKind::training) fail("'training' initial conditions are only valid for tests");
  }
  if (basis.initial.kind == InitialKind::reduced) fail("basis trajectories cannot use reduced initial conditions");
  if (test.params < 1 || test.trajectories < 1) fail("test counts must be >= 1");
  if (test.input_ranges.empty()) fail("need at least one test input range");
  for (const auto& r : test.input_ranges) {
    if (r.lo > r.hi) fail("input range must satisfy lo <= hi");
  }
  if (test.initial.kind == InitialKind::training && test.trajectories > training.count) {
    fail("test reuses training initial conditions but has more trajectories than training");
  }
  if (dims.empty()) fail("need at least one reduced dimension");
  for (const Index n : dims) {
    if (n < 1) fail("reduced dimensions must be >= 1");
  }
  if (!(grid.lo > 0.0) || grid.hi < grid.lo || grid.count < 2) fail("lambda grid must satisfy 0 < lo <= hi, count >= 2");
  if (methods.empty()) fail("need at least one method");
  std::set<MethodKind> seen(methods.begin(), methods.end());
  if (seen.size() != methods.size()) fail("methods must be unique");
  if (quadratic_scale && problem != Problem::synthetic) fail("quadratic_scale only applies to the synthetic problem");
  if (spir.max_iterations < 1 || !(spir.tolerance > 0.0)) fail("bad spir options");
}

Index ExperimentConfig::max_dim() const { return *std::max_element(dims.begin(), dims.end()); }

std::vector<double> ExperimentConfig::test_params() const { return linspace(mu_lo(), mu_hi(), test.params); }

ExperimentConfig parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, {"name", "problem", "N", "mesh_h", "dt", "steps", "train_params", "basis", "training", "test", "dims",
                 "lambda_grid", "methods", "epsilon", "seed", "quadratic_scale", "constant", "spir", "output"},
             "config");
  ExperimentConfig c;
  c.name = get<std::string>(j, "name", "");
  c.problem = problem_from_string(get<std::string>(j, "problem", "synthetic"));
  c.N = get<Index>(j, "N", c.N);
  c.mesh_h = get<double>(j, "mesh_h", c.mesh_h);
  c.dt = get<double>(j, "dt", c.dt);
  c.steps = get<Index>(j, "steps", c.steps);
  if (j.contains("train_params")) {
    const auto& tp = j.at("train_params");
    if (tp.is_array()) {
      c.train_params = get<std::vector<double>>(j, "train_params", {});
    } else {
      check_keys(tp, {"lo", "hi", "count"}, "train_params");
      c.train_params = linspace(get<double>(tp, "lo", 0.0), get<double>(tp, "hi", 1.0), get<Index>(tp, "count", 10));
    }
  }
  if (j.contains("basis")) c.basis = parse_set(j.at("basis"), "basis");
  if (j.contains("training")) c.training = parse_set(j.at("training"), "training");
  if (j.contains("test")) {
    const auto& t = j.at("test");
    check_keys(t, {"params", "trajectories", "input_ranges", "initial"}, "test");
    c.test.params = get<Index>(t, "params", c.test.params);
    c.test.trajectories = get<Index>(t, "trajectories", c.test.trajectories);
    if (t.contains("input_ranges")) {
      if (!t.at("input_ranges").is_array()) throw ConfigError("config", "input_ranges must be a list");
      for (const auto& r : t.at("input_ranges")) c.test.input_ranges.push_back(parse_range(r));
    }
    if (t.contains("initial")) c.test.initial = parse_initial(t.at("initial"));
  }
  c.dims = get<std::vector<Index>>(j, "dims", {});
  if (j.contains("lambda_grid")) {
    const auto& g = j.at("lambda_grid");
    check_keys(g, {"lo", "hi", "count"}, "lambda_grid");
    c.grid.lo = get<double>(g, "lo", c.grid.lo);
    c.grid.hi = get<double>(g, "hi", c.grid.hi);
    c.grid.count = get<std::size_t>(g, "count", c.grid.count);
  }
  for (const auto& m : get<std::vector<std::string>>(j, "methods", {})) {
    c.methods.push_back(method_kind_from_string(m));
  }
  c.epsilon = get<double>(j, "epsilon", c.epsilon);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("quadratic_scale")) c.quadratic_scale = get<double>(j, "quadratic_scale", 0.0);
  c.constant = get<bool>(j, "constant", c.constant);
  if (j.contains("spir")) {
    const auto& s = j.at("spir");
    check_keys(s, {"tolerance", "max_iterations"}, "spir");
    c.spir.tolerance = get<double>(s, "tolerance", c.spir.tolerance);
    c.spir.max_iterations = get<Index>(s, "max_iterations", c.spir.max_iterations);
  }
  c.output = get<std::string>(j, "output", c.output.string());
  c.validate();
  return c;
}

ExperimentConfig load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config", "cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["problem"] = std::string(to_string(c.problem));
  j["N"] = c.N;
  j["mesh_h"] = c.mesh_h;
  j["dt"] = c.dt;
  j["steps"] = c.steps;
  j["train_params"] = c.train_params;
  j["basis"] = set_json(c.basis);
  j["training"] = set_json(c.training);
  json ranges = json::array();
  for (const auto& r : c.test.input_ranges) ranges.push_back(range_json(r));
  j["test"] = json{{"params", c.test.params},
                   {"trajectories", c.test.trajectories},
                   {"input_ranges", ranges},
                   {"initial", initial_json(c.test.initial)}};
  j["dims"] = c.dims;
  j["lambda_grid"] = json{{"lo", c.grid.lo}, {"hi", c.grid.hi}, {"count", c.grid.count}};
  json methods = json::array();
  for (const auto m : c.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = methods;
  j["epsilon"] = c.epsilon;
  j["seed"] = c.seed;
  if (c.quadratic_scale) j["quadratic_scale"] = *c.quadratic_scale;
  j["constant"] = c.constant;
  j["spir"] = json{{"tolerance", c.spir.tolerance}, {"max_iterations", c.spir.max_iterations}};
  j["output"] = c.output.generic_string();
  return j.dump(2);  // nlohmann objects are key-sorted
}

ExperimentConfig preset(std::string_view experiment) {
  ExperimentConfig c;
  c.name = std::string(experiment);
  c.output = "runs/" + c.name;
  c.methods = {MethodKind::plain, MethodKind::pir, MethodKind::intrusive};
  if (experiment == "synthetic") {
    c.problem = Problem::synthetic;
    c.N = 64;
    c.dt = 1e-3;
    c.steps = 1000;
    c.train_params = linspace(0.1, 1.0, 10);
    c.basis = {1, {0.0, 2.0}, {InitialKind::uniform, 0.0, 1.0}};
    c.training = {3, {0.0, 2.0}, {InitialKind::uniform, 0.0, 1.0}};
    c.test = {7, 1, {{0.0, 10.0}}, {InitialKind::uniform, 0.0, 1.0}};
    c.dims = {2, 4, 6, 8, 10};
    c.grid = {1e-15, 1e5, 51};
    c.seed = 7;
  } else if (experiment == "burgers") {
    c.problem = Problem::burgers;
    c.N = 64;
    c.dt = 1e-4;
    c.steps = 2000;
    c.train_params = linspace(10.0, 100.0, 10);
    c.basis = {1, {0.0, 2.0}, {InitialKind::zero, 0.0, 0.0}};
    c.training = {10, {0.0, 2.0}, {InitialKind::reduced, 0.0, 1.0}};
    c.test = {7, 5, {{0.0, 2.0}, {0.0, 3.0}, {0.0, 4.0}}, {InitialKind::training, 0.0, 1.0}};
    c.dims = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    c.grid = {1e-10, 1e10, 51};
    c.methods = {MethodKind::plain, MethodKind::tikhonov, MethodKind::pir, MethodKind::intrusive};
    c.seed = 11;
  } else if (experiment == "reaction_diffusion") {
    c.problem = Problem::reaction_diffusion;
    c.mesh_h = 1.0 / 12.0;
    c.dt = 1e-3;
    c.steps = 2000;
    c.train_params = linspace(1.0, 1.5, 10);
    c.basis = {1, {0.0, 1.0}, {InitialKind::zero, 0.0, 0.0}};
    c.training = {10, {0.0, 1.0}, {InitialKind::zero, 0.0, 0.0}};
    c.test = {7, 1, {{0.0, 1.0}}, {InitialKind::zero, 0.0, 0.0}};
    c.dims = {2, 4, 6, 8};
    c.grid = {1e-10, 1e10, 51};
    c.methods = {MethodKind::plain, MethodKind::tikhonov, MethodKind::pir, MethodKind::spir, MethodKind::intrusive};
    c.constant = true;
    c.seed = 5;
  } else {
    throw ConfigError("config", "unknown experiment '" + std::string(experiment) + "'");
  }
  c.validate();
  return c;
}

std::vector<std::string> preset_names() { return {"synthetic", "burgers", "reaction_diffusion"}; }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace opinf::config
