#pragma once

#include <stdexcept>
#include <string>

namespace hamcarl {

// Inputs that violate a structural invariant: bad structure constants,
// points off their orbit, singular symplectic matrices and the like.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Least-squares problems whose design matrix lost rank.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A polynomial fit whose residual exceeded the configured threshold.
class FitRejectedError : public std::runtime_error {
 public:
  FitRejectedError(const std::string& what, int slice, double residual)
      : std::runtime_error(what), slice_(slice), residual_(residual) {}
  int slice() const { return slice_; }
  double residual() const { return residual_; }

 private:
  int slice_;
  double residual_;
};

// An integrated trajectory left every bounded region.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double last_valid_time)
      : std::runtime_error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace hamcarl
