#include "nsf/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "nsf/errors.hpp"

namespace nsf {

int step_count(double final_time, double dt) {
  if (!(final_time > 0.0)) throw ConfigError("run: final time must be positive");
  if (!(dt > 0.0)) throw ConfigError("run: time step must be positive");
  // Guard against T/dt landing a hair above an integer.
  const double ratio = final_time / dt;
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-10 * nearest) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

RunResult run(const DataBundle& data, const SchemeParams& params, const RunOptions& options) {
  data.validate();
  params.validate();
  auto disc = std::make_shared<const Discretization>(data.mesh, data.fluid, data.boundary, params);
  ImplicitSolver solver(disc, options.exec);
  std::unique_ptr<Diagnostics> diag;
  if (options.diagnostics) diag = std::make_unique<Diagnostics>(disc);

  const double dt = disc->time_step();
  const int n = step_count(options.final_time, dt);

  RunResult out;
  State state = data.initial;
  state.t = 0.0;
  out.initial_mass = 0.0;
  for (double r : state.rho) out.initial_mass += r;
  out.initial_mass *= data.mesh->cell_measure();
  out.lambda_max = state_bounds(state).lambda;
  if (options.diagnostics) out.records.reserve(static_cast<std::size_t>(n));

  AprioriAccumulator acc;
  for (int k = 1; k <= n; ++k) {
    const double t_next = k == n ? options.final_time : k * dt;
    const double step = t_next - state.t;
    StepReport rep;
    State next = solver.solve_step(state, step, &rep);
    next.t = t_next;
    out.newton_iterations += rep.newton_iterations;
    out.linear_iterations += rep.linear_iterations;

    DiagnosticsRecord rec;
    if (diag) {
      rec = diag->evaluate(state, next, step);
      acc.add(rec);
      out.records.push_back(rec);
      out.lambda_max = std::max(out.lambda_max, rec.lambda);
      out.positive = out.positive && rec.rho_min > 0.0 && rec.theta_min > 0.0;
    } else {
      const StateBounds b = state_bounds(next);
      out.lambda_max = std::max(out.lambda_max, b.lambda);
      out.positive = out.positive && b.rho_min > 0.0 && b.theta_min > 0.0;
    }
    state = std::move(next);
    ++out.steps;
    if (options.snapshot_every > 0 && k % options.snapshot_every == 0) out.snapshots.push_back(state);
    if (options.on_step) options.on_step(k, state, diag ? &out.records.back() : nullptr);
  }
  out.apriori = acc.result();
  out.final_state = std::move(state);
  return out;
}

}  // namespace nsf
