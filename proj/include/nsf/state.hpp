#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "nsf/discrete_ops.hpp"
#include "nsf/mesh.hpp"
#include "nsf/thermo.hpp"

namespace nsf {

/// Unknowns per cell in the packed layout: rho, u1, u2, theta.
inline constexpr int kVarsPerCell = 4;

/// Piecewise-constant density, velocity and temperature at one time level.
struct State {
  std::vector<double> rho;
  std::vector<Vec2> u;
  std::vector<double> theta;
  double t = 0.0;

  int num_cells() const noexcept { return static_cast<int>(rho.size()); }

  static State uniform(int cells, double rho0, const Vec2& u0, double theta0);

  Eigen::VectorXd pack() const;
  void unpack(const Eigen::VectorXd& x);

  /// min rho > 0 and min theta > 0 and everything finite.
  bool admissible() const;
};

/// Boundary temperature per exterior face (mesh.exterior_faces() order); u_B = 0.
struct BoundaryData {
  std::vector<double> theta;
};

/// A discretised data-space element: mesh, coefficients, initial and boundary values.
struct DataBundle {
  std::shared_ptr<const Mesh> mesh;
  FluidParams fluid;
  State initial;
  BoundaryData boundary;
  std::vector<double> provenance;  // random parameters that generated the data, if any

  /// Throws DataValidationError on nonpositive rho0, theta0 or theta_B.
  void validate() const;
};

// Field views with the policies the scheme uses: rho copy, u antisymmetric,
// theta Dirichlet with the boundary temperature.
ScalarField density_field(const Mesh& mesh, const State& s);
VectorField velocity_field(const Mesh& mesh, const State& s);
ScalarField temperature_field(const Mesh& mesh, const State& s, const BoundaryData& bc);

}  // namespace nsf
