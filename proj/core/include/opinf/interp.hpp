#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/types.hpp"

#include <string_view>
#include <vector>

namespace opinf::interp {

enum class Structure {
  plain,       ///< no structure on A; interpolated entrywise, then reflected
  snd_linear,  ///< every A symmetric negative definite; Log-Cholesky path
};

std::string_view to_string(Structure s);

/// Models learned at sorted training parameters.
struct ModelFamily {
  std::vector<double> params;
  std::vector<QuadraticModel> models;
  Structure structure = Structure::plain;

  /// Throws ArgumentError unless params are strictly increasing, sizes
  /// match and all models share dimensions.
  void validate() const;

  /// Copy without node j (leave-one-out).
  [[nodiscard]] ModelFamily without(std::size_t j) const;
};

/// Piecewise-linear entrywise interpolation of A, B, F, c between the
/// bracketing nodes, followed by eigenvalue reflection of A. A parameter equal
/// to a node returns that node's operators (reflected only if not Hurwitz).
/// Throws ExtrapolationError outside [params.front(), params.back()].
QuadraticModel interp_entrywise(const ModelFamily& family, double mu, double epsilon);

/// Log-Cholesky interpolation of A: with -A(mu_i) = L_i L_i^T, the strict
/// lower parts of L_i are interpolated linearly and the log of the diagonals
/// linearly, then A(mu) = -L(mu) L(mu)^T. B, F, c are entrywise-linear.
/// Throws StructureError if some -A(mu_i) is not positive definite.
QuadraticModel interp_log_cholesky(const ModelFamily& family, double mu);

/// Dispatch on family.structure.
QuadraticModel interpolate(const ModelFamily& family, double mu, double epsilon);

}  // namespace opinf::interp
