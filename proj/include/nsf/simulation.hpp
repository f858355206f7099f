#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "nsf/diagnostics.hpp"
#include "nsf/scheme.hpp"
#include "nsf/state.hpp"

namespace nsf {

struct RunOptions {
  double final_time = 1.0;
  Exec exec = Exec::parallel;
  bool diagnostics = true;  // full DiagnosticsRecord per step; otherwise only bounds are tracked
  int snapshot_every = 0;   // keep every n-th state (0: none); the final state is always returned
  /// Called after every accepted step with the step index (1-based).
  std::function<void(int, const State&, const DiagnosticsRecord*)> on_step;
};

struct RunResult {
  State final_state;
  std::vector<DiagnosticsRecord> records;
  std::vector<State> snapshots;
  AprioriNorms apriori;
  double initial_mass = 0.0;
  double lambda_max = 0.0;  // sup over all time levels, including t = 0
  bool positive = true;     // rho, theta > 0 at every level
  int steps = 0;
  int newton_iterations = 0;
  int linear_iterations = 0;
};

/// Number of backward-Euler steps to reach T: ceil(T / dt), with the last step
/// shortened so that it lands on T.
int step_count(double final_time, double dt);

/// Advances the data to `final_time`. Propagates StepFailure / PositivityFailure.
RunResult run(const DataBundle& data, const SchemeParams& params, const RunOptions& options);

}  // namespace nsf
