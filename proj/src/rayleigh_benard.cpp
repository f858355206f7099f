#include "nsf/rayleigh_benard.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsf/discrete_ops.hpp"
#include "nsf/errors.hpp"
#include "nsf/rng.hpp"

namespace nsf {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMaxParam = 0.1;
}  // namespace

RBConfig RBConfig::with_seed(std::uint64_t seed) {
  RBConfig cfg;
  cfg.perturbation_seed = seed;
  rng::Xoshiro256pp gen(seed);
  double total = 0.0;
  for (std::size_t j = 0; j < cfg.aj.size(); ++j) {
    cfg.aj[j] = gen.uniform01();
    total += cfg.aj[j];
  }
  for (double& a : cfg.aj) a /= total;
  for (double& b : cfg.bj) b = gen.uniform(-kPi, kPi);
  return cfg;
}

double RBConfig::perturbation(double x1) const {
  double p = 0.0;
  for (std::size_t j = 0; j < aj.size(); ++j) {
    p += aj[j] * std::cos(bj[j] + 2.0 * static_cast<double>(j + 1) * kPi * x1);
  }
  return p;
}

void RBConfig::validate() const {
  fluid.validate();
  double total = 0.0;
  for (double a_j : aj) {
    if (a_j < 0.0 || a_j > 1.0) throw ConfigError("rb: a_j must lie in [0, 1]");
    total += a_j;
  }
  if (std::abs(total - 1.0) > 1e-14) throw ConfigError("rb: a_j must sum to 1");
  for (double b_j : bj) {
    if (b_j < -kPi || b_j > kPi) throw ConfigError("rb: b_j must lie in [-pi, pi]");
  }
  if (!(theta_bottom() > 0.0) || !(theta_top() > 0.0)) {
    throw ConfigError("rb: wall temperatures must be positive");
  }
  if (!(rho_mean > 0.0)) throw ConfigError("rb: rho_mean must be positive");
}

double rb_density(const RBConfig& cfg, const Vec2& x, double y1) {
  return cfg.rho_mean + (1.0 + y1) * std::sin(0.5 * kPi * x.y());
}

Vec2 rb_velocity(const RBConfig& cfg, const Vec2& x) {
  return {0.0, cfg.c * std::sin(2.0 * kPi * x.y())};
}

double rb_temperature(const RBConfig& cfg, const Vec2& x, double y2) {
  return cfg.a + cfg.b * x.y() + cfg.c * cfg.perturbation(x.x()) * std::sin(kPi * x.y()) +
         y2 * std::sin(kPi * x.x()) * std::sin(0.25 * kPi * (x.y() + 1.0));
}

double rb_wall_temperature(const RBConfig& cfg, double x1, bool top, double y2) {
  if (!top) return cfg.theta_bottom();
  return cfg.theta_top() + y2 * std::sin(kPi * x1);
}

DataBundle rb_data(const RBConfig& cfg, RandomModel model, const std::vector<double>& param,
                   std::shared_ptr<const Mesh> mesh) {
  cfg.validate();
  double y1 = 0.0;
  double y2 = 0.0;
  const std::size_t expected = model == RandomModel::none ? 0 : model == RandomModel::collocation ? 1 : 2;
  if (param.size() != expected) {
    std::ostringstream msg;
    msg << "rb_data: expected " << expected << " random parameters, got " << param.size();
    throw ConfigError(msg.str());
  }
  for (double v : param) {
    if (!(std::abs(v) <= kMaxParam * (1.0 + 1e-12))) {
      throw DataValidationError("rb_data: random parameter outside [-0.1, 0.1]");
    }
  }
  if (model == RandomModel::collocation) {
    y1 = y2 = param[0];
  } else if (model == RandomModel::monte_carlo) {
    y1 = param[0];
    y2 = param[1];
  }

  DataBundle data;
  data.mesh = mesh;
  data.fluid = cfg.fluid;
  data.provenance = param;
  data.initial.rho = project_cell([&](const Vec2& x) { return rb_density(cfg, x, y1); }, *mesh);
  data.initial.u = project_cell([&](const Vec2& x) { return rb_velocity(cfg, x); }, *mesh);
  data.initial.theta = project_cell([&](const Vec2& x) { return rb_temperature(cfg, x, y2); }, *mesh);
  data.boundary.theta = project_exterior(
      [&](const Vec2& x) { return rb_wall_temperature(cfg, x.x(), x.y() > 0.0, y2); }, *mesh);
  data.initial.t = 0.0;
  data.validate();
  return data;
}

DataBundle equilibrium_data(std::shared_ptr<const Mesh> mesh, const FluidParams& fluid,
                            double rho0, double theta0) {
  DataBundle data;
  data.fluid = fluid;
  data.fluid.g = Vec2::Zero();
  data.initial = State::uniform(mesh->num_cells(), rho0, Vec2::Zero(), theta0);
  data.boundary.theta.assign(mesh->exterior_faces().size(), theta0);
  data.mesh = std::move(mesh);
  data.validate();
  return data;
}

}  // namespace nsf
