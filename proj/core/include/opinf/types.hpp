#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <limits>

namespace opinf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative-error score that may carry the divergence sentinel.
///
/// A diverged score orders above every finite score, and any sum that
/// touches a diverged score is itself diverged.
class ErrorScore {
 public:
  constexpr ErrorScore() = default;
  constexpr explicit ErrorScore(double value) : value_(value) {}

  static constexpr ErrorScore diverged() {
    ErrorScore s;
    s.diverged_ = true;
    s.value_ = std::numeric_limits<double>::infinity();
    return s;
  }

  [[nodiscard]] constexpr bool is_diverged() const { return diverged_; }
  [[nodiscard]] constexpr double value() const { return value_; }

  constexpr ErrorScore& operator+=(const ErrorScore& other) {
    if (diverged_ || other.diverged_) {
      *this = diverged();
    } else {
      value_ += other.value_;
    }
    return *this;
  }
  friend constexpr ErrorScore operator+(ErrorScore a, const ErrorScore& b) { return a += b; }

  [[nodiscard]] constexpr ErrorScore scaled(double factor) const {
    return diverged_ ? *this : ErrorScore(value_ * factor);
  }

  friend constexpr bool operator==(const ErrorScore& a, const ErrorScore& b) {
    return a.diverged_ == b.diverged_ && (a.diverged_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(const ErrorScore& a, const ErrorScore& b) {
    if (a.diverged_ || b.diverged_) {
      return a.diverged_ <=> b.diverged_;
    }
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool diverged_ = false;
};

}  // namespace opinf
