#include "nsf/thermo.hpp"

#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

void require_positive(double rho, double theta, const char* where) {
  if (!(rho > 0.0) || !(theta > 0.0)) {
    std::ostringstream msg;
    msg << where << ": nonpositive state (rho = " << rho << ", theta = " << theta << ")";
    throw PositivityViolation(msg.str());
  }
}

}  // namespace

void FluidParams::validate() const {
  if (!(mu > 0.0)) throw ConfigError("fluid: mu must be positive");
  if (!(lambda >= 0.0)) throw ConfigError("fluid: lambda must be nonnegative");
  if (!(kappa > 0.0)) throw ConfigError("fluid: kappa must be positive");
  if (!(gamma > 1.0)) throw ConfigError("fluid: gamma must exceed 1");
  if (!g.allFinite()) throw ConfigError("fluid: gravity must be finite");
}

double pressure(double rho, double theta) {
  require_positive(rho, theta, "pressure");
  return rho * theta;
}

double internal_energy(double theta, double cv) {
  require_positive(1.0, theta, "internal_energy");
  return cv * theta;
}

double entropy(double rho, double theta, double cv) {
  require_positive(rho, theta, "entropy");
  return cv * std::log(theta) - std::log(rho);
}

double energy_density(double rho, const Vec2& u, double theta, double cv) {
  require_positive(rho, theta, "energy_density");
  return 0.5 * rho * u.squaredNorm() + cv * rho * theta;
}

double ballistic_density(double rho, const Vec2& u, double theta, double test_temperature,
                         double cv) {
  require_positive(rho, theta, "ballistic_density");
  if (!(test_temperature > 0.0)) throw PositivityViolation("ballistic_density: Theta <= 0");
  return energy_density(rho, u, theta, cv) - test_temperature * rho * entropy(rho, theta, cv);
}

}  // namespace nsf
