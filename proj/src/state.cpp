#include "nsf/state.hpp"

#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

State State::uniform(int cells, double rho0, const Vec2& u0, double theta0) {
  State s;
  s.rho.assign(static_cast<std::size_t>(cells), rho0);
  s.u.assign(static_cast<std::size_t>(cells), u0);
  s.theta.assign(static_cast<std::size_t>(cells), theta0);
  return s;
}

Eigen::VectorXd State::pack() const {
  const int n = num_cells();
  Eigen::VectorXd x(kVarsPerCell * n);
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    x[4 * k + 0] = rho[i];
    x[4 * k + 1] = u[i].x();
    x[4 * k + 2] = u[i].y();
    x[4 * k + 3] = theta[i];
  }
  return x;
}

void State::unpack(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size()) / kVarsPerCell;
  rho.resize(static_cast<std::size_t>(n));
  u.resize(static_cast<std::size_t>(n));
  theta.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    rho[i] = x[4 * k + 0];
    u[i] = Vec2(x[4 * k + 1], x[4 * k + 2]);
    theta[i] = x[4 * k + 3];
  }
}

bool State::admissible() const {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0) || !(theta[i] > 0.0) || !std::isfinite(rho[i]) ||
        !std::isfinite(theta[i]) || !u[i].allFinite()) {
      return false;
    }
  }
  return true;
}

void DataBundle::validate() const {
  if (!mesh) throw DataValidationError("data: mesh missing");
  const auto cells = static_cast<std::size_t>(mesh->num_cells());
  if (initial.rho.size() != cells || initial.u.size() != cells || initial.theta.size() != cells) {
    throw DataValidationError("data: initial fields do not match the mesh");
  }
  if (boundary.theta.size() != mesh->exterior_faces().size()) {
    throw DataValidationError("data: boundary temperature does not match the exterior faces");
  }
  if (!initial.admissible()) throw DataValidationError("data: initial rho or theta not positive");
  for (double tb : boundary.theta) {
    if (!(tb > 0.0) || !std::isfinite(tb)) {
      std::ostringstream msg;
      msg << "data: boundary temperature not positive (" << tb << ")";
      throw DataValidationError(msg.str());
    }
  }
}

ScalarField density_field(const Mesh& mesh, const State& s) {
  return {&mesh, s.rho, BoundaryPolicy<double>::copy()};
}

VectorField velocity_field(const Mesh& mesh, const State& s) {
  return {&mesh, s.u, BoundaryPolicy<Vec2>::antisymmetric()};
}

ScalarField temperature_field(const Mesh& mesh, const State& s, const BoundaryData& bc) {
  return {&mesh, s.theta, BoundaryPolicy<double>::dirichlet(bc.theta)};
}

}  // namespace nsf
