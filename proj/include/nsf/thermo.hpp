#pragma once

#include "nsf/mesh.hpp"

namespace nsf {

/// Transport and state-law coefficients of the Boyle-Mariotte gas.
struct FluidParams {
  double mu = 0.1;      // shear viscosity
  double lambda = 0.1;  // bulk coefficient in S = 2 mu D + lambda div u I
  double kappa = 0.01;  // heat conductivity
  double gamma = 1.4;
  Vec2 g = Vec2(0.0, -10.0);

  double cv() const noexcept { return 1.0 / (gamma - 1.0); }

  /// Throws ConfigError unless mu > 0, lambda >= 0, kappa > 0, gamma > 1.
  void validate() const;
};

// p = rho theta, e = cv theta, s = cv log(theta) - log(rho).
// All throw PositivityViolation for rho <= 0 or theta <= 0.
double pressure(double rho, double theta);
double internal_energy(double theta, double cv);
double entropy(double rho, double theta, double cv);

/// 1/2 rho |u|^2 + cv rho theta
double energy_density(double rho, const Vec2& u, double theta, double cv);

/// 1/2 rho |u|^2 + cv rho theta - Theta rho s
double ballistic_density(double rho, const Vec2& u, double theta, double test_temperature,
                         double cv);

}  // namespace nsf
