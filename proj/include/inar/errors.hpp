#pragma once

#include <stdexcept>
#include <string>

namespace inar {

// Thrown when the CLS design matrix Q_n is numerically singular, e.g. for a
// constant series. Carries the offending condition number (may be inf).
class SingularDesign : public std::runtime_error {
 public:
  SingularDesign(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Thrown when a matrix that must be positive definite (the estimated
// information matrix, or any input to inverse_sqrt) is not. Carries the
// smallest-to-largest eigenvalue ratio that failed the threshold.
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(const std::string& what, double eigenvalue_ratio)
      : std::runtime_error(what), ratio_(eigenvalue_ratio) {}
  double eigenvalue_ratio() const { return ratio_; }

 private:
  double ratio_;
};

}  // namespace inar
