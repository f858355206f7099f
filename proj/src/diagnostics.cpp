#include "nsf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/SparseCholesky>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

double wall_value(const Mesh& mesh, const BoundaryData& bc, const Face& sigma) {
  return bc.theta[static_cast<std::size_t>(mesh.exterior_index(sigma.id))];
}

double entropy_integral(const Mesh& mesh, const FluidParams& fluid, const State& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    acc += s.rho[i] * entropy(s.rho[i], s.theta[i], fluid.cv());
  }
  return mesh.cell_measure() * acc;
}

double energy_integral(const Mesh& mesh, const FluidParams& fluid, const State& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    acc += energy_density(s.rho[i], s.u[i], s.theta[i], fluid.cv());
  }
  return mesh.cell_measure() * acc;
}

}  // namespace

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols{
      "t",         "mass",     "energy",   "ballistic", "D_E",      "Ds1",
      "heatflux",  "work",     "normgradtheta", "normDu", "jumpdiss", "rhomin",
      "rhomax",    "thetamin", "thetamax", "umax",      "lambda",   "dt",
      "entropy",   "eclosure", "normdt",   "bvisc",     "bheat"};
  return cols;
}

void write_diagnostics_header(std::ostream& os) {
  const auto& cols = diagnostics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  const double v[] = {r.t,
                      r.mass,
                      r.energy,
                      r.ballistic,
                      r.dissipation,
                      r.entropy_production,
                      r.heat_flux,
                      r.work,
                      r.norm_grad_theta,
                      r.norm_strain,
                      r.jump_dissipation,
                      r.rho_min,
                      r.rho_max,
                      r.theta_min,
                      r.theta_max,
                      r.u_max,
                      r.lambda,
                      r.dt,
                      r.entropy,
                      r.energy_closure,
                      r.norm_time_derivative,
                      r.ballistic_viscous,
                      r.ballistic_heat};
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  bool first = true;
  for (double x : v) {
    os << (first ? "" : ",") << x;
    first = false;
  }
  os << '\n';
  os.flags(old_flags);
  os.precision(old_prec);
}

StateBounds state_bounds(const State& s) {
  StateBounds b;
  b.rho_min = b.theta_min = std::numeric_limits<double>::infinity();
  b.rho_max = b.theta_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    b.rho_min = std::min(b.rho_min, s.rho[i]);
    b.rho_max = std::max(b.rho_max, s.rho[i]);
    b.theta_min = std::min(b.theta_min, s.theta[i]);
    b.theta_max = std::max(b.theta_max, s.theta[i]);
    b.u_max = std::max(b.u_max, s.u[i].norm());
  }
  const double rho_abs = std::max(std::abs(b.rho_min), std::abs(b.rho_max));
  const double theta_abs = std::max(std::abs(b.theta_min), std::abs(b.theta_max));
  double inv_rho = 0.0;
  double inv_theta = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    inv_rho = std::max(inv_rho, 1.0 / std::abs(s.rho[i]));
    inv_theta = std::max(inv_theta, 1.0 / std::abs(s.theta[i]));
  }
  b.lambda = std::max({rho_abs, inv_rho, theta_abs, inv_theta, b.u_max});
  return b;
}

double numerical_dissipation(const Discretization& disc, const State& now, const State& old,
                             double dt) {
  const Mesh& mesh = disc.mesh();
  double time_term = 0.0;
  for (std::size_t i = 0; i < now.rho.size(); ++i) {
    time_term += old.rho[i] * ((now.u[i] - old.u[i]) / dt).squaredNorm();
  }
  time_term *= 0.5 * dt * mesh.cell_measure();

  const VectorField u = velocity_field(mesh, now);
  double penalty = 0.0;
  double upwind_term = 0.0;
  for (int f : mesh.interior_faces()) {
    const Face& sigma = mesh.face(f);
    const auto a = static_cast<std::size_t>(sigma.in_cell);
    const auto b = static_cast<std::size_t>(sigma.out_cell);
    const double ju = (now.u[b] - now.u[a]).squaredNorm();
    const double un = avg(u, sigma).dot(sigma.normal);
    const double r_up = un >= 0.0 ? now.rho[a] : now.rho[b];
    penalty += sigma.area * 0.5 * (now.rho[a] + now.rho[b]) * ju;
    upwind_term += sigma.area * r_up * std::abs(un) * ju;
  }
  return time_term + disc.flux_diffusion() * penalty + 0.5 * upwind_term;
}

FaceField<double> chi_weight(const Mesh& mesh, const State& s, const BoundaryData& bc) {
  FaceField<double> chi{&mesh, std::vector<double>(static_cast<std::size_t>(mesh.num_faces()))};
  for (const Face& sigma : mesh.faces()) {
    const double t_in = s.theta[static_cast<std::size_t>(sigma.in_cell)];
    const double t_out = sigma.interior() ? s.theta[static_cast<std::size_t>(sigma.out_cell)]
                                          : wall_value(mesh, bc, sigma);
    chi.values[static_cast<std::size_t>(sigma.id)] = t_in / t_out;
  }
  return chi;
}

double weighted_temperature_dissipation(const Mesh& mesh, double kappa, const State& s,
                                        const BoundaryData& bc,
                                        const std::vector<double>* test_temperature) {
  const ScalarField theta = temperature_field(mesh, s, bc);
  const FaceField<Vec2> g = grad_dual(theta);
  const FaceField<double> chi = chi_weight(mesh, s, bc);
  ScalarField big_theta{&mesh, {}, BoundaryPolicy<double>::dirichlet(bc.theta)};
  if (test_temperature) big_theta.values = *test_temperature;
  double acc = 0.0;
  for (const Face& sigma : mesh.faces()) {
    const auto f = static_cast<std::size_t>(sigma.id);
    const double t_in = s.theta[static_cast<std::size_t>(sigma.in_cell)];
    const double weight = test_temperature ? avg(big_theta, sigma) : 1.0;
    acc += mesh.dual_measure(sigma.id) * weight * kappa * chi.values[f] / (t_in * t_in) *
           g.values[f].squaredNorm();
  }
  return acc;
}

std::vector<double> harmonic_test_temperature(const Mesh& mesh, const BoundaryData& bc) {
  const int n = mesh.num_cells();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5 * n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (const CellFace& cf : mesh.cell_faces(k)) {
      const Face& sigma = mesh.face(cf.face);
      if (sigma.interior()) {
        const int other = cf.sign > 0 ? sigma.out_cell : sigma.in_cell;
        trip.emplace_back(k, k, 1.0);
        trip.emplace_back(k, other, -1.0);
      } else {
        trip.emplace_back(k, k, 2.0);
        rhs[k] += 2.0 * wall_value(mesh, bc, sigma);
      }
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("harmonic_test_temperature: factorisation failed");
  }
  const Eigen::VectorXd x = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("harmonic_test_temperature: solve failed");
  }
  return {x.data(), x.data() + n};
}

double ballistic_energy(const Mesh& mesh, const FluidParams& fluid, const State& s,
                        const std::vector<double>& test_temperature) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    acc += ballistic_density(s.rho[i], s.u[i], s.theta[i], test_temperature[i], fluid.cv());
  }
  return mesh.cell_measure() * acc;
}

BallisticReport ballistic_report(const Discretization& disc, const State& s,
                                 const std::vector<double>& test_temperature) {
  const Mesh& mesh = disc.mesh();
  const FluidParams& fl = disc.fluid();
  const VectorField u = velocity_field(mesh, s);
  const std::vector<Mat2> grad = grad_h(u);
  const StrainStress ss = strain_and_stress(u, fl.mu, fl.lambda);
  BallisticReport rep;
  rep.energy = ballistic_energy(mesh, fl, s, test_temperature);
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    rep.viscous += test_temperature[i] / s.theta[i] * (ss.stress[i].array() * grad[i].array()).sum();
  }
  rep.viscous *= mesh.cell_measure();
  rep.heat = weighted_temperature_dissipation(mesh, fl.kappa, s, disc.boundary(), &test_temperature);
  return rep;
}

Diagnostics::Diagnostics(std::shared_ptr<const Discretization> disc)
    : disc_(std::move(disc)),
      test_temperature_(harmonic_test_temperature(disc_->mesh(), disc_->boundary())) {}

DiagnosticsRecord Diagnostics::evaluate(const State& old, const State& now, double dt) const {
  const Discretization& disc = *disc_;
  const Mesh& mesh = disc.mesh();
  const FluidParams& fl = disc.fluid();
  const BoundaryData& bc = disc.boundary();
  const double vol = mesh.cell_measure();
  const double cond = fl.kappa / mesh.h();

  DiagnosticsRecord r;
  r.t = now.t;
  r.dt = dt;

  for (std::size_t i = 0; i < now.rho.size(); ++i) {
    r.mass += now.rho[i];
    r.work += now.rho[i] * fl.g.dot(now.u[i]);
  }
  r.mass *= vol;
  r.work *= vol;
  r.energy = energy_integral(mesh, fl, now);
  r.entropy = entropy_integral(mesh, fl, now);

  const BallisticReport bal = ballistic_report(disc, now, test_temperature_);
  r.ballistic = bal.energy;
  r.ballistic_viscous = bal.viscous;
  r.ballistic_heat = bal.heat;

  r.dissipation = numerical_dissipation(disc, now, old, dt);

  // Heat terms of the energy and entropy balances.
  double wall_entropy_flux = 0.0;
  for (int f : mesh.exterior_faces()) {
    const Face& sigma = mesh.face(f);
    const double t_in = now.theta[static_cast<std::size_t>(sigma.in_cell)];
    const double tb = wall_value(mesh, bc, sigma);
    r.heat_flux += sigma.area * (t_in - tb);
    wall_entropy_flux += sigma.area * (t_in - tb) / t_in;
  }
  r.heat_flux *= 2.0 * cond;
  wall_entropy_flux *= 2.0 * cond;

  double interior_heat = 0.0;
  const VectorField u = velocity_field(mesh, now);
  double jumps = 0.0;
  for (int f : mesh.interior_faces()) {
    const Face& sigma = mesh.face(f);
    const auto a = static_cast<std::size_t>(sigma.in_cell);
    const auto b = static_cast<std::size_t>(sigma.out_cell);
    const double jt = now.theta[b] - now.theta[a];
    interior_heat += sigma.area * jt * (1.0 / now.theta[b] - 1.0 / now.theta[a]);
    const double un = avg(u, sigma).dot(sigma.normal);
    const double jr = now.rho[b] - now.rho[a];
    const double jp = pressure(now.rho[b], now.theta[b]) - pressure(now.rho[a], now.theta[a]);
    jumps += sigma.area * (disc.flux_diffusion() + std::abs(un)) *
             (jr * jr + jp * jp + (now.u[b] - now.u[a]).squaredNorm());
  }
  interior_heat *= cond;
  r.jump_dissipation = jumps;

  const std::vector<Mat2> grad = grad_h(u);
  const StrainStress ss = strain_and_stress(u, fl.mu, fl.lambda);
  double viscous_entropy = 0.0;
  double strain_sq = 0.0;
  for (std::size_t i = 0; i < now.rho.size(); ++i) {
    viscous_entropy += (ss.stress[i].array() * grad[i].array()).sum() / now.theta[i];
    strain_sq += ss.strain[i].squaredNorm();
  }
  viscous_entropy *= vol;
  r.norm_strain = std::sqrt(vol * strain_sq);

  const double e_old = energy_integral(mesh, fl, old);
  const double s_old = entropy_integral(mesh, fl, old);
  r.energy_closure = (r.energy - e_old) / dt + r.heat_flux - r.work + r.dissipation;
  r.entropy_production =
      (r.entropy - s_old) / dt - viscous_entropy + interior_heat + wall_entropy_flux;

  const FaceField<Vec2> gt = grad_dual(temperature_field(mesh, now, bc));
  double gt_sq = 0.0;
  for (const Face& sigma : mesh.faces()) {
    gt_sq += mesh.dual_measure(sigma.id) * gt.values[static_cast<std::size_t>(sigma.id)].squaredNorm();
  }
  r.norm_grad_theta = std::sqrt(gt_sq);

  double dt_sq = 0.0;
  for (std::size_t i = 0; i < now.rho.size(); ++i) {
    const double dr = (now.rho[i] - old.rho[i]) / dt;
    const double dth = (now.theta[i] - old.theta[i]) / dt;
    dt_sq += dr * dr + dth * dth + ((now.u[i] - old.u[i]) / dt).squaredNorm();
  }
  r.norm_time_derivative = std::sqrt(vol * dt_sq);

  const StateBounds b = state_bounds(now);
  r.rho_min = b.rho_min;
  r.rho_max = b.rho_max;
  r.theta_min = b.theta_min;
  r.theta_max = b.theta_max;
  r.u_max = b.u_max;
  r.lambda = b.lambda;
  return r;
}

void AprioriAccumulator::add(const DiagnosticsRecord& r) {
  grad_theta_sq_ += r.dt * r.norm_grad_theta * r.norm_grad_theta;
  strain_sq_ += r.dt * r.norm_strain * r.norm_strain;
  time_derivative_sq_ += r.dt * r.dt * r.norm_time_derivative * r.norm_time_derivative;
  jump_ += r.dt * r.jump_dissipation;
}

AprioriNorms AprioriAccumulator::result() const {
  return {std::sqrt(grad_theta_sq_), std::sqrt(strain_sq_), std::sqrt(time_derivative_sq_), jump_};
}

std::vector<BalanceCheck> balance_checks(const std::vector<DiagnosticsRecord>& records,
                                         double initial_mass, double newton_tol) {
  // NaN wins both comparisons, so a non-finite record fails every check it touches.
  // A NaN, once seen, sticks.
  const auto up = [](double& acc, double x) { if (!std::isnan(acc) && !(x <= acc)) acc = x; };
  const auto down = [](double& acc, double x) { if (!std::isnan(acc) && !(x >= acc)) acc = x; };
  const double inf = std::numeric_limits<double>::infinity();
  double mass = 0.0;
  double positivity = inf;
  double closure = 0.0;
  double dissipation = inf;
  double production = inf;
  double viscous = inf;
  double heat = inf;
  for (const auto& r : records) {
    const double scale = std::max(std::abs(r.energy), 1.0);
    up(mass, std::abs(r.mass - initial_mass) / std::abs(initial_mass));
    down(positivity, r.rho_min);
    down(positivity, r.theta_min);
    up(closure, std::abs(r.energy_closure) / scale);
    down(dissipation, r.dissipation / scale);
    down(production, r.entropy_production / scale);
    down(viscous, r.ballistic_viscous / scale);
    down(heat, r.ballistic_heat / scale);
  }
  return {
      {"mass drift (relative)", mass, 1e-11, mass <= 1e-11},
      {"min(rho, theta)", positivity, 0.0, positivity > 0.0},
      {"energy closure / scale", closure, 10.0 * newton_tol, closure <= 10.0 * newton_tol},
      {"D_E / scale", dissipation, -1e-12, dissipation >= -1e-12},
      {"D_s(1) / scale", production, -1e-9, production >= -1e-9},
      {"ballistic viscous / scale", viscous, -1e-10, viscous >= -1e-10},
      {"ballistic heat / scale", heat, -1e-10, heat >= -1e-10},
  };
}

bool TailReport::monotone() const {
  for (std::size_t i = 1; i < fraction.size(); ++i) {
    if (thresholds[i] >= thresholds[i - 1] && fraction[i] > fraction[i - 1]) return false;
  }
  return true;
}

TailReport lambda_tail(const std::vector<double>& lambdas, std::vector<double> thresholds) {
  std::sort(thresholds.begin(), thresholds.end());
  TailReport rep;
  rep.samples = static_cast<int>(lambdas.size());
  rep.thresholds = std::move(thresholds);
  for (double level : rep.thresholds) {
    const auto above = std::count_if(lambdas.begin(), lambdas.end(), [&](double x) { return x > level; });
    rep.fraction.push_back(lambdas.empty() ? 0.0
                                           : static_cast<double>(above) / static_cast<double>(lambdas.size()));
  }
  return rep;
}

}  // namespace nsf
