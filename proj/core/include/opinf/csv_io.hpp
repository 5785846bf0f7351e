#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/types.hpp"

#include <filesystem>
#include <string>

namespace opinf::csv {

/// Shortest round-trip decimal representation ("%.17g"); "nan", "inf",
/// "-inf" for non-finite values.
std::string format_number(double value);

/// Parses format_number output (and anything strtod accepts).
double parse_number(const std::string& token);

/// Headerless numeric CSV, one matrix row per line.
void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& m);
Matrix read_matrix(const std::filesystem::path& path);

/// Header `t,x1..xn,u1..up`; row k holds t_k = k dt, state x_k and the input
/// that drives the step k -> k+1 (empty on the final row).
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& path);

/// Model operators as A.csv, B.csv, F.csv, c.csv inside dir.
void write_model(const std::filesystem::path& dir, const QuadraticModel& model);
QuadraticModel read_model(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace opinf::csv
