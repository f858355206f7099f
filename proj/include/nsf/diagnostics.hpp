#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nsf/discrete_ops.hpp"
#include "nsf/scheme.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Balance and norm quantities of one accepted step, evaluated at the new
/// time level (rates use the old level as well).
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;                // int rho
  double energy = 0.0;              // E = int 1/2 rho |u|^2 + cv rho theta
  double ballistic = 0.0;           // int 1/2 rho |u|^2 + cv rho theta - Theta_h rho s
  double dissipation = 0.0;         // D_E
  double entropy_production = 0.0;  // D_s(1), recovered as a residual
  double heat_flux = 0.0;           // 2 kappa/h sum_ext |sigma| (theta_in - theta_B)
  double work = 0.0;                // int rho g.u
  double norm_grad_theta = 0.0;     // ||grad_E theta||_L2(Q)
  double norm_strain = 0.0;         // ||D_h u||_L2(Q)
  double jump_dissipation = 0.0;    // sum_int |sigma| (h^a + |{{u}}.n|)([[rho]]^2 + [[p]]^2 + |[[u]]|^2)
  double rho_min = 0.0;
  double rho_max = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double u_max = 0.0;
  double lambda = 0.0;  // max(|rho|, |1/rho|, |theta|, |1/theta|, |u|) in sup norm

  double dt = 0.0;
  double entropy = 0.0;                // int rho s
  double energy_closure = 0.0;         // D_t E + heat_flux - work + D_E
  double norm_time_derivative = 0.0;   // ||D_t (rho, theta, u)||_L2(Q)
  double ballistic_viscous = 0.0;      // int Theta_h/theta S_h : grad_h u
  double ballistic_heat = 0.0;         // chi-weighted heat dissipation with Theta_h
};

/// CSV column names, in row order.
const std::vector<std::string>& diagnostics_columns();
void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);

/// Pointwise extrema and the boundedness statistic of a state.
struct StateBounds {
  double rho_min = 0.0;
  double rho_max = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double u_max = 0.0;
  double lambda = 0.0;
};
StateBounds state_bounds(const State& s);

/// D_E between two consecutive levels; every term is nonnegative.
double numerical_dissipation(const Discretization& disc, const State& now, const State& old,
                             double dt);

/// chi_h per face: theta_in/theta_out on interior dual cells, theta_in/theta_B on the walls.
FaceField<double> chi_weight(const Mesh& mesh, const State& s, const BoundaryData& bc);

/// sum_sigma |D_sigma| Theta_sigma kappa chi/theta_in^2 |grad_E theta|^2. Theta_sigma is
/// {{Theta}} (Dirichlet continuation by theta_B); a null `test_temperature` means Theta = 1.
double weighted_temperature_dissipation(const Mesh& mesh, double kappa, const State& s,
                                        const BoundaryData& bc,
                                        const std::vector<double>* test_temperature = nullptr);

/// Discrete harmonic extension of the wall temperature: 5-point Laplacian,
/// ghost = 2 theta_B - Theta_K on the walls, periodic in x1.
std::vector<double> harmonic_test_temperature(const Mesh& mesh, const BoundaryData& bc);

double ballistic_energy(const Mesh& mesh, const FluidParams& fluid, const State& s,
                        const std::vector<double>& test_temperature);

struct BallisticReport {
  double energy = 0.0;
  double viscous = 0.0;  // int Theta/theta S_h : grad_h u
  double heat = 0.0;     // chi-weighted heat dissipation with Theta
};
BallisticReport ballistic_report(const Discretization& disc, const State& s,
                                 const std::vector<double>& test_temperature);

/// Evaluates DiagnosticsRecord for a fixed discretisation. Holds Theta_h.
class Diagnostics {
 public:
  explicit Diagnostics(std::shared_ptr<const Discretization> disc);

  const std::vector<double>& test_temperature() const noexcept { return test_temperature_; }

  DiagnosticsRecord evaluate(const State& old, const State& now, double dt) const;

 private:
  std::shared_ptr<const Discretization> disc_;
  std::vector<double> test_temperature_;
};

/// Space-time norms accumulated with the piecewise-constant-in-time rule.
struct AprioriNorms {
  double grad_theta = 0.0;        // ||grad_E theta||_L2((0,T) x Q)
  double strain = 0.0;            // ||D_h u||_L2((0,T) x Q)
  double time_derivative = 0.0;   // sqrt(dt) ||D_t (rho, theta, u)||_L2((0,T) x Q)
  double jump_dissipation = 0.0;  // int_0^T of the jump dissipation
};

class AprioriAccumulator {
 public:
  void add(const DiagnosticsRecord& r);
  AprioriNorms result() const;

 private:
  double grad_theta_sq_ = 0.0;
  double strain_sq_ = 0.0;
  double time_derivative_sq_ = 0.0;
  double jump_ = 0.0;
};

/// One pass/fail line of the per-step balance checks.
struct BalanceCheck {
  std::string name;
  double worst = 0.0;  // worst value over the steps, in the units of `limit`
  double limit = 0.0;
  bool pass = false;
};

/// Mass drift, positivity, energy closure and the signed dissipation terms
/// over a trajectory. Scale for the balances is max(|E|, 1) per step.
std::vector<BalanceCheck> balance_checks(const std::vector<DiagnosticsRecord>& records,
                                         double initial_mass, double newton_tol);

/// Empirical P(Lambda > L) for each threshold L.
struct TailReport {
  std::vector<double> thresholds;
  std::vector<double> fraction;
  int samples = 0;

  bool monotone() const;
};
TailReport lambda_tail(const std::vector<double>& lambdas, std::vector<double> thresholds);

}  // namespace nsf
