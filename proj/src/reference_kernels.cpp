// Serial face-scatter assembly built directly on the discrete operators.
// Reference for tests and benchmarks; the production path is kernels.cpp.

#include "nsf/discrete_ops.hpp"
#include "nsf/scheme.hpp"

namespace nsf::reference {

Eigen::VectorXd residual(const Discretization& disc, const State& old, const State& trial,
                         double dt) {
  const Mesh& mesh = disc.mesh();
  const int n = mesh.num_cells();
  const FluidParams& fl = disc.fluid();
  const double cv = fl.cv();
  const double vol = mesh.cell_measure();
  const double h = mesh.h();
  const double alpha = disc.params().alpha;
  const double cond = fl.kappa / h;

  const VectorField u = velocity_field(mesh, trial);
  const ScalarField rho = density_field(mesh, trial);
  const ScalarField theta = temperature_field(mesh, trial, disc.boundary());
  ScalarField m1{&mesh, std::vector<double>(static_cast<std::size_t>(n)), BoundaryPolicy<double>::copy()};
  ScalarField m2 = m1;
  ScalarField rt = m1;
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    m1.values[i] = trial.rho[i] * trial.u[i].x();
    m2.values[i] = trial.rho[i] * trial.u[i].y();
    rt.values[i] = trial.rho[i] * trial.theta[i];
  }

  const std::vector<Mat2> grad = grad_h(u);
  const StrainStress ss = strain_and_stress(u, fl.mu, fl.lambda);
  std::vector<Mat2> total(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    total[i] = ss.stress[i] - pressure(trial.rho[i], trial.theta[i]) * Mat2::Identity();
  }

  Eigen::VectorXd r = Eigen::VectorXd::Zero(kVarsPerCell * n);
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    r[4 * k] = vol * (trial.rho[i] - old.rho[i]) / dt;
    const Vec2 mom = vol * (trial.rho[i] * trial.u[i] - old.rho[i] * old.u[i]) / dt -
                     vol * trial.rho[i] * fl.g;
    r[4 * k + 1] = mom.x();
    r[4 * k + 2] = mom.y();
    double work = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) work += total[i](a, b) * grad[i](a, b);
    }
    r[4 * k + 3] = cv * vol * (trial.rho[i] * trial.theta[i] - old.rho[i] * old.theta[i]) / dt -
                   vol * work;
  }

  for (const Face& sigma : mesh.faces()) {
    const int a = sigma.in_cell;
    if (!sigma.interior()) {
      r[4 * a + 3] += 2.0 * cond * sigma.area * (theta[a] - avg(theta, sigma));
      continue;
    }
    const int b = sigma.out_cell;
    const double f_mass = flux_diffusive_upwind(rho, u, sigma, h, alpha);
    const double f_m1 = flux_diffusive_upwind(m1, u, sigma, h, alpha);
    const double f_m2 = flux_diffusive_upwind(m2, u, sigma, h, alpha);
    const double f_en = cv * flux_diffusive_upwind(rt, u, sigma, h, alpha);
    const double heat = -cond * jump(theta, sigma);
    const Vec2 st = 0.5 * sigma.area *
                    (total[static_cast<std::size_t>(a)] - total[static_cast<std::size_t>(b)]) *
                    sigma.normal;
    // -F [[phi]] with [[1_a]] = -1 and [[1_b]] = +1.
    r[4 * a + 0] += sigma.area * f_mass;
    r[4 * a + 1] += sigma.area * f_m1 + st.x();
    r[4 * a + 2] += sigma.area * f_m2 + st.y();
    r[4 * a + 3] += sigma.area * (f_en + heat);
    r[4 * b + 0] -= sigma.area * f_mass;
    r[4 * b + 1] += -sigma.area * f_m1 + st.x();
    r[4 * b + 2] += -sigma.area * f_m2 + st.y();
    r[4 * b + 3] -= sigma.area * (f_en + heat);
  }
  return r;
}

}  // namespace nsf::reference
