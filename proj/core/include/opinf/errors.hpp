#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opinf {

/// Base class for every failure raised by the library. Carries the name of
/// the module that detected the problem so the CLI can tag its diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, const std::string& what);

  [[nodiscard]] const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Shape mismatches, out-of-domain arguments, malformed inputs.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Requested basis dimension exceeds the numerical rank of the snapshots.
class RankError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be Hurwitz is not.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Singular systems and other floating-point breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Eigenvector basis too ill-conditioned for eigenvalue reflection.
class DiagonalizabilityError : public Error {
 public:
  using Error::Error;
};

/// A structured interpolation input violates its structure
/// (e.g. -A not positive definite).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Interpolation requested outside the training parameter range.
class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

/// Every regularization candidate diverged during selection.
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or unreadable artifact.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace opinf
