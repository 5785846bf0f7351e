#include "opinf/interp.hpp"

#include "opinf/errors.hpp"
#include "opinf/stability.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace opinf::interp {

namespace {

struct Bracket {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double weight = 0.0;  // of the upper node
  bool exact = false;
};

Bracket locate(const std::vector<double>& params, double mu) {
  if (params.empty()) {
    throw ArgumentError("interp", "empty model family");
  }
  if (!(mu >= params.front() && mu <= params.back())) {
    throw ExtrapolationError("interp", "parameter outside the training range");
  }
  const auto it = std::lower_bound(params.begin(), params.end(), mu);
  const auto hi = static_cast<std::size_t>(it - params.begin());
  if (*it == mu) {
    return {hi, hi, 0.0, true};
  }
  const std::size_t lo = hi - 1;
  return {lo, hi, (mu - params[lo]) / (params[hi] - params[lo]), false};
}

Matrix lerp(const Matrix& a, const Matrix& b, double w) { return (1.0 - w) * a + w * b; }

QuadraticModel lerp_model(const QuadraticModel& a, const QuadraticModel& b, double w) {
  return {lerp(a.A, b.A, w), lerp(a.B, b.B, w), lerp(a.F, b.F, w), Vector((1.0 - w) * a.c + w * b.c)};
}

Matrix negative_cholesky(const Matrix& A) {
  const Matrix neg = -0.5 * (A + A.transpose());
  if ((A - A.transpose()).norm() > 1e-10 * std::max(1.0, A.norm())) {
    throw StructureError("interp", "linear operator is not symmetric");
  }
  Eigen::LLT<Matrix> llt(neg);
  if (llt.info() != Eigen::Success) {
    throw StructureError("interp", "-A is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

std::string_view to_string(Structure s) { return s == Structure::plain ? "plain" : "snd-linear"; }

void ModelFamily::validate() const {
  if (params.empty() || params.size() != models.size()) {
    throw ArgumentError("interp", "family needs one model per parameter");
  }
  for (std::size_t i = 1; i < params.size(); ++i) {
    if (!(params[i] > params[i - 1])) {
      throw ArgumentError("interp", "family parameters must be strictly increasing");
    }
  }
  const Index n = models.front().dim();
  const Index p = models.front().input_dim();
  for (const auto& m : models) {
    m.validate();
    if (m.dim() != n || m.input_dim() != p) {
      throw ArgumentError("interp", "family models differ in dimension");
    }
  }
}

ModelFamily ModelFamily::without(std::size_t j) const {
  if (j >= params.size()) {
    throw ArgumentError("interp", "leave-out index out of range");
  }
  ModelFamily out;
  out.structure = structure;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i != j) {
      out.params.push_back(params[i]);
      out.models.push_back(models[i]);
    }
  }
  return out;
}

QuadraticModel interp_entrywise(const ModelFamily& family, double mu, double epsilon) {
  const Bracket b = locate(family.params, mu);
  QuadraticModel m = b.exact ? family.models[b.lo] : lerp_model(family.models[b.lo], family.models[b.hi], b.weight);
  m.A = stability::reflect_eigenvalues(m.A, epsilon);
  return m;
}

QuadraticModel interp_log_cholesky(const ModelFamily& family, double mu) {
  const Bracket b = locate(family.params, mu);
  if (b.exact) {
    negative_cholesky(family.models[b.lo].A);
    return family.models[b.lo];
  }
  const QuadraticModel& lo = family.models[b.lo];
  const QuadraticModel& hi = family.models[b.hi];
  const Matrix L0 = negative_cholesky(lo.A);
  const Matrix L1 = negative_cholesky(hi.A);
  const Index n = L0.rows();
  Matrix L = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      L(i, j) = (1.0 - b.weight) * L0(i, j) + b.weight * L1(i, j);
    }
    L(j, j) = std::exp((1.0 - b.weight) * std::log(L0(j, j)) + b.weight * std::log(L1(j, j)));
  }
  QuadraticModel out = lerp_model(lo, hi, b.weight);
  Matrix A = -L * L.transpose();
  out.A = 0.5 * (A + A.transpose());
  return out;
}

QuadraticModel interpolate(const ModelFamily& family, double mu, double epsilon) {
  return family.structure == Structure::snd_linear ? interp_log_cholesky(family, mu)
                                                   : interp_entrywise(family, mu, epsilon);
}

}  // namespace opinf::interp
