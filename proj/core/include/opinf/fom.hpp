#pragma once

#include "opinf/dynamics.hpp"
#include "opinf/types.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>

namespace opinf::fom {

/// Parameterized full-order model mu -> QuadraticModel(mu).
struct FomFamily {
  std::function<QuadraticModel(double)> builder;
  Index N = 0;
  Index p = 0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  std::uint64_t seed = 0;

  [[nodiscard]] QuadraticModel at(double mu) const { return builder(mu); }
};

/// Mixes a base seed with stream tags into an independent 64-bit seed
/// (splitmix64 finalizer per tag).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

/// Uniform i.i.d. matrix, piecewise constant in time when used as an input
/// trajectory (one column per time step).
struct SignalSpec {
  double lo = 0.0;
  double hi = 1.0;
  Index rows = 1;
  Index length = 1;
  std::uint64_t seed = 0;
};

Matrix sample_signal(const SignalSpec& spec);

/// Synthetic family A(mu) = -mu (A_s + A_s^T + 2N I) with A_s, B, F drawn once
/// from U[0,1]; F is multiplied by quadratic_scale. Domain [0.1, 1], p = 1.
FomFamily build_synthetic(Index N, std::uint64_t seed, double quadratic_scale);

/// Default quadratic_scale for build_synthetic: 1/N. With unscaled U[0,1]
/// entries the positive quadratic term swamps the linear damping and the
/// full model blows up within a few explicit Euler steps.
double default_synthetic_quadratic_scale(Index N);

/// Viscous Burgers' equation on N interior points of (0,1), h = 1/(N+1),
/// x(0,t) = u(t), x(1,t) = 0. Diffusion coefficient is 1/mu. Convection uses
/// first-order upwind in conservative form -(x_i^2 - x_{i-1}^2)/(2h); the
/// inflow term u^2/(2h) is quadratic in the input and is not represented.
QuadraticModel build_burgers(Index N, double mu);
FomFamily burgers_family(Index N);

/// Constants of the reaction source g(x) = -(a sin mu + 2) exp(-mu^2 b)
/// (1 + mu c x + (mu c)^2 x^2 / 2).
struct ReactionConstants {
  static constexpr double a = 0.1;
  static constexpr double b = 2.7;
  static constexpr double c = 1.8;
};

/// Source g evaluated at a scalar state.
double reaction_source(double x, double mu);

/// Reaction-diffusion on the unit square, cell-centred grid of (1/h)^2 points
/// with homogeneous Neumann boundaries (mirrored ghost cells). Input enters
/// through s(xi) = 0.1 sin(2 pi xi_1) sin(2 pi xi_2). The Taylor-expanded
/// source contributes its constant to c, linear part to diag(A) and quadratic
/// part to the diagonal pairs of F.
QuadraticModel build_reaction_diffusion(double mesh_h, double mu);
FomFamily reaction_diffusion_family(double mesh_h);

/// Pure Neumann diffusion block of build_reaction_diffusion.
Matrix neumann_laplacian_2d(Index points_per_side, double h);

}  // namespace opinf::fom
