#pragma once

#include <stdexcept>
#include <string>

namespace qtf {

/// An iterative linear solve failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// A time step exceeded a stability limit; the caller may retry with a
/// smaller dt.
class StepRejected : public std::runtime_error {
 public:
  StepRejected(const std::string& what, double dt_limit)
      : std::runtime_error(what), dt_limit_(dt_limit) {}
  double dt_limit() const { return dt_limit_; }

 private:
  double dt_limit_;
};

}  // namespace qtf
