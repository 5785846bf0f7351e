#include "opinf/csv_io.hpp"

#include "opinf/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace opinf::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ConfigError("io", "cannot open '" + path.string() + "' for writing");
  }
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ConfigError("io", "cannot open '" + path.string() + "'");
  }
  return is;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_number(const std::string& token) {
  if (token.empty()) {
    throw ConfigError("io", "empty numeric field");
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw ConfigError("io", "malformed number '" + token + "'");
  }
  return v;
}

void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& m) {
  auto os = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) {
        os << ',';
      }
      os << format_number(m(i, j));
    }
    os << '\n';
  }
}

Matrix read_matrix(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    for (const auto& f : split(line)) {
      row.push_back(parse_number(f));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError("io", "ragged matrix in '" + path.string() + "'");
    }
    rows.push_back(std::move(row));
  }
  const auto r = static_cast<Index>(rows.size());
  const auto c = rows.empty() ? Index{0} : static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  auto os = open_out(path);
  const Index n = traj.states.rows();
  const Index p = traj.inputs.rows();
  os << 't';
  for (Index i = 1; i <= n; ++i) {
    os << ",x" << i;
  }
  for (Index i = 1; i <= p; ++i) {
    os << ",u" << i;
  }
  os << '\n';
  for (Index k = 0; k < traj.states.cols(); ++k) {
    os << format_number(static_cast<double>(k) * traj.dt);
    for (Index i = 0; i < n; ++i) {
      os << ',' << format_number(traj.states(i, k));
    }
    for (Index i = 0; i < p; ++i) {
      os << ',';
      if (k < traj.inputs.cols()) {
        os << format_number(traj.inputs(i, k));
      }
    }
    os << '\n';
  }
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) {
    throw ConfigError("io", "empty trajectory file '" + path.string() + "'");
  }
  const auto header = split(line);
  if (header.empty() || header.front() != "t") {
    throw ConfigError("io", "trajectory header must start with 't'");
  }
  Index n = 0;
  Index p = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (!header[i].empty() && header[i][0] == 'x') {
      ++n;
    } else if (!header[i].empty() && header[i][0] == 'u') {
      ++p;
    } else {
      throw ConfigError("io", "unexpected trajectory column '" + header[i] + "'");
    }
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (!line.empty()) {
      rows.push_back(split(line));
    }
  }
  const auto cols = static_cast<Index>(rows.size());
  if (cols == 0) {
    throw ConfigError("io", "trajectory has no rows");
  }
  Trajectory traj;
  traj.states.resize(n, cols);
  traj.inputs.resize(p, cols - 1);
  std::vector<double> times;
  for (Index k = 0; k < cols; ++k) {
    const auto& f = rows[static_cast<std::size_t>(k)];
    if (static_cast<Index>(f.size()) != 1 + n + p) {
      throw ConfigError("io", "trajectory row has the wrong number of fields");
    }
    times.push_back(parse_number(f[0]));
    for (Index i = 0; i < n; ++i) {
      traj.states(i, k) = parse_number(f[static_cast<std::size_t>(1 + i)]);
    }
    for (Index i = 0; i < p && k + 1 < cols; ++i) {
      traj.inputs(i, k) = parse_number(f[static_cast<std::size_t>(1 + n + i)]);
    }
  }
  traj.dt = cols > 1 ? times[1] - times[0] : 0.0;
  traj.diverged = !traj.states.allFinite();
  return traj;
}

void write_model(const std::filesystem::path& dir, const QuadraticModel& model) {
  std::filesystem::create_directories(dir);
  write_matrix(dir / "A.csv", model.A);
  write_matrix(dir / "B.csv", model.B);
  write_matrix(dir / "F.csv", model.F);
  write_matrix(dir / "c.csv", model.c);
}

QuadraticModel read_model(const std::filesystem::path& dir) {
  Matrix A = read_matrix(dir / "A.csv");
  Matrix B = read_matrix(dir / "B.csv");
  Matrix F = read_matrix(dir / "F.csv");
  std::optional<Vector> c;
  if (std::filesystem::exists(dir / "c.csv")) {
    const Matrix cm = read_matrix(dir / "c.csv");
    c = Eigen::Map<const Vector>(cm.data(), cm.size());
  }
  if (B.rows() == 0) {
    B.resize(A.rows(), 0);
  }
  QuadraticModel m(std::move(A), std::move(B), std::move(F), std::move(c));
  m.validate();
  return m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
}

std::string read_text(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace opinf::csv
