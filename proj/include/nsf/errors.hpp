#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nsf {

/// Invalid user or programmatic configuration (bad mesh sizes, parameters, files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonpositive density or temperature handed to a thermodynamic function.
class PositivityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial or boundary data that fails validation.
class DataValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton iteration for one backward-Euler step did not converge.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, double time, std::vector<double> residual_history)
      : std::runtime_error(what), time_(time), history_(std::move(residual_history)) {}

  double time() const noexcept { return time_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  double time_;
  std::vector<double> history_;
};

/// The accepted Newton iterate has a nonpositive density or temperature.
class PositivityFailure : public std::runtime_error {
 public:
  PositivityFailure(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace nsf
