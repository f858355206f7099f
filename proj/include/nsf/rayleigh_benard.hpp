#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "nsf/mesh.hpp"
#include "nsf/state.hpp"
#include "nsf/thermo.hpp"

namespace nsf {

/// How random parameters enter the Rayleigh-Benard data.
enum class RandomModel {
  none,        // deterministic data
  collocation, // one parameter Y: density amplitude 1+Y, temperature perturbation Y
  monte_carlo, // two parameters (Y1, Y2): density amplitude 1+Y1, temperature perturbation Y2
};

/// Coefficients of the Rayleigh-Benard experiment.
struct RBConfig {
  double a = 8.0;    // (1 + 15)/2
  double b = -7.0;   // (1 - 15)/2
  double c = 0.01;   // perturbation amplitude
  double rho_mean = 1.2;
  FluidParams fluid{};  // mu = lambda = 0.1, kappa = 0.01, gamma = 1.4, g = (0, -10)
  std::uint64_t perturbation_seed = 20240611;
  std::array<double, 10> aj{};  // sum to 1
  std::array<double, 10> bj{};  // phases in [-pi, pi]

  double theta_bottom() const noexcept { return a - b; }
  double theta_top() const noexcept { return a + b; }

  /// Config with a_j, b_j drawn from `perturbation_seed`.
  static RBConfig with_seed(std::uint64_t seed);

  /// Perturbation P(x1) = sum_j a_j cos(b_j + 2 j pi x1).
  double perturbation(double x1) const;

  void validate() const;
};

// Closed-form data; `y1` scales the density term, `y2` the random temperature term.
double rb_density(const RBConfig& cfg, const Vec2& x, double y1);
Vec2 rb_velocity(const RBConfig& cfg, const Vec2& x);
double rb_temperature(const RBConfig& cfg, const Vec2& x, double y2);

/// Trace of rb_temperature on x2 = 1 (top) or x2 = -1, written in closed form.
double rb_wall_temperature(const RBConfig& cfg, double x1, bool top, double y2);

/// Projected initial and boundary data on `mesh`. `param` must match the
/// random model (empty, {Y} or {Y1, Y2}) with |values| <= 0.1.
DataBundle rb_data(const RBConfig& cfg, RandomModel model, const std::vector<double>& param,
                   std::shared_ptr<const Mesh> mesh);

/// Constant state (rho0, 0, theta0) with theta_B = theta0 and g = 0.
DataBundle equilibrium_data(std::shared_ptr<const Mesh> mesh, const FluidParams& fluid,
                            double rho0, double theta0);

}  // namespace nsf
