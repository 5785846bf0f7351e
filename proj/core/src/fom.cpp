#include "opinf/fom.hpp"

#include "opinf/errors.hpp"
#include "opinf/quadform.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

namespace opinf::fom {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix uniform_matrix(std::mt19937_64& gen, Index rows, Index cols, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  // Fill column by column so the draw order is independent of storage order.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = dist(gen);
    }
  }
  return m;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = splitmix64(base);
  for (const auto t : tags) {
    s = splitmix64(s ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  }
  return s;
}

Matrix sample_signal(const SignalSpec& spec) {
  if (!(spec.lo <= spec.hi)) {
    throw ArgumentError("fom", "signal range requires lo <= hi");
  }
  if (spec.rows < 0 || spec.length < 0) {
    throw ArgumentError("fom", "signal shape must be nonnegative");
  }
  if (spec.lo == spec.hi) {
    return Matrix::Constant(spec.rows, spec.length, spec.lo);
  }
  std::mt19937_64 gen(spec.seed);
  return uniform_matrix(gen, spec.rows, spec.length, spec.lo, spec.hi);
}

double default_synthetic_quadratic_scale(Index N) { return 1.0 / static_cast<double>(N); }

FomFamily build_synthetic(Index N, std::uint64_t seed, double quadratic_scale) {
  if (N < 2) {
    throw ArgumentError("fom", "synthetic model needs N >= 2");
  }
  std::mt19937_64 gen(derive_seed(seed, {0x5f4e}));
  Matrix As = uniform_matrix(gen, N, N, 0.0, 1.0);
  Matrix B = uniform_matrix(gen, N, 1, 0.0, 1.0);
  Matrix F = quadratic_scale * uniform_matrix(gen, N, quadform::compressed_size(N), 0.0, 1.0);
  Matrix base = As + As.transpose();
  base.diagonal().array() += 2.0 * static_cast<double>(N);

  auto shared = std::make_shared<const QuadraticModel>(Matrix(base), std::move(B), std::move(F));
  FomFamily fam;
  fam.N = N;
  fam.p = 1;
  fam.mu_lo = 0.1;
  fam.mu_hi = 1.0;
  fam.seed = seed;
  fam.builder = [shared](double mu) {
    QuadraticModel m = *shared;
    m.A *= -mu;
    return m;
  };
  return fam;
}

QuadraticModel build_burgers(Index N, double mu) {
  if (N < 3) {
    throw ArgumentError("fom", "Burgers' model needs N >= 3");
  }
  if (!(mu > 0.0)) {
    throw ArgumentError("fom", "Burgers' parameter must be positive");
  }
  const double h = 1.0 / static_cast<double>(N + 1);
  const double diff = 1.0 / (mu * h * h);
  const double conv = 1.0 / (2.0 * h);

  Matrix A = Matrix::Zero(N, N);
  Matrix B = Matrix::Zero(N, 1);
  Matrix F = Matrix::Zero(N, quadform::compressed_size(N));
  for (Index i = 0; i < N; ++i) {
    A(i, i) = -2.0 * diff;
    if (i > 0) {
      A(i, i - 1) = diff;
    }
    if (i + 1 < N) {
      A(i, i + 1) = diff;
    }
    F(i, quadform::pair_index(i, i)) = -conv;
    if (i > 0) {
      F(i, quadform::pair_index(i - 1, i - 1)) = conv;
    }
  }
  B(0, 0) = diff;
  return {std::move(A), std::move(B), std::move(F)};
}

FomFamily burgers_family(Index N) {
  FomFamily fam;
  fam.N = N;
  fam.p = 1;
  fam.mu_lo = 10.0;
  fam.mu_hi = 100.0;
  fam.builder = [N](double mu) { return build_burgers(N, mu); };
  return fam;
}

double reaction_source(double x, double mu) {
  using K = ReactionConstants;
  const double k = (K::a * std::sin(mu) + 2.0) * std::exp(-mu * mu * K::b);
  const double mc = mu * K::c;
  return -k * (1.0 + mc * x + 0.5 * mc * mc * x * x);
}

Matrix neumann_laplacian_2d(Index m, double h) {
  Matrix L1 = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    if (i > 0) {
      L1(i, i - 1) = 1.0;
      L1(i, i) -= 1.0;
    }
    if (i + 1 < m) {
      L1(i, i + 1) = 1.0;
      L1(i, i) -= 1.0;
    }
  }
  L1 /= h * h;
  const Index N = m * m;
  Matrix L = Matrix::Zero(N, N);
  // Index (i1, i2) -> i1 + m*i2; L = I (x) L1 + L1 (x) I.
  for (Index i2 = 0; i2 < m; ++i2) {
    for (Index i1 = 0; i1 < m; ++i1) {
      const Index r = i1 + m * i2;
      for (Index k = 0; k < m; ++k) {
        L(r, k + m * i2) += L1(i1, k);
        L(r, i1 + m * k) += L1(i2, k);
      }
    }
  }
  return L;
}

QuadraticModel build_reaction_diffusion(double mesh_h, double mu) {
  if (!(mesh_h > 0.0)) {
    throw ArgumentError("fom", "mesh width must be positive");
  }
  const double inv = 1.0 / mesh_h;
  const auto m = static_cast<Index>(std::llround(inv));
  if (m < 2 || std::abs(inv - static_cast<double>(m)) > 1e-9 * inv) {
    throw ArgumentError("fom", "1/mesh_h must be an integer >= 2");
  }
  const double h = 1.0 / static_cast<double>(m);
  const Index N = m * m;

  using K = ReactionConstants;
  const double k = (K::a * std::sin(mu) + 2.0) * std::exp(-mu * mu * K::b);
  const double mc = mu * K::c;

  Matrix A = neumann_laplacian_2d(m, h);
  A.diagonal().array() += -k * mc;

  Matrix B(N, 1);
  for (Index i2 = 0; i2 < m; ++i2) {
    for (Index i1 = 0; i1 < m; ++i1) {
      const double xi1 = (static_cast<double>(i1) + 0.5) * h;
      const double xi2 = (static_cast<double>(i2) + 0.5) * h;
      B(i1 + m * i2, 0) = 0.1 * std::sin(2.0 * std::numbers::pi * xi1) * std::sin(2.0 * std::numbers::pi * xi2);
    }
  }

  Matrix F = Matrix::Zero(N, quadform::compressed_size(N));
  for (Index i = 0; i < N; ++i) {
    F(i, quadform::pair_index(i, i)) = -k * 0.5 * mc * mc;
  }
  Vector c = Vector::Constant(N, -k);
  return {std::move(A), std::move(B), std::move(F), std::move(c)};
}

FomFamily reaction_diffusion_family(double mesh_h) {
  const auto m = static_cast<Index>(std::llround(1.0 / mesh_h));
  FomFamily fam;
  fam.N = m * m;
  fam.p = 1;
  fam.mu_lo = 1.0;
  fam.mu_hi = 1.5;
  fam.builder = [mesh_h](double mu) { return build_reaction_diffusion(mesh_h, mu); };
  return fam;
}

}  // namespace opinf::fom
