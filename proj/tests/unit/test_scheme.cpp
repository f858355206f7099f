#include "doctest.h"

#include <cmath>
#include <memory>

#include "nsf/discrete_ops.hpp"
#include "nsf/errors.hpp"
#include "nsf/rayleigh_benard.hpp"
#include "nsf/rng.hpp"
#include "nsf/scheme.hpp"
#include "nsf/simulation.hpp"

using namespace nsf;

namespace {

std::shared_ptr<const Mesh> small_mesh(int nx = 6, int ny = 4) {
  return std::make_shared<const Mesh>(build_mesh(nx, ny, nx * 2.0 / ny));
}

State random_state(rng::Xoshiro256pp& gen, int cells) {
  State s = State::uniform(cells, 1.0, Vec2::Zero(), 1.0);
  for (int k = 0; k < cells; ++k) {
    const auto i = static_cast<std::size_t>(k);
    s.rho[i] = gen.uniform(0.5, 2.0);
    s.u[i] = Vec2(gen.uniform(-1, 1), gen.uniform(-1, 1));
    s.theta[i] = gen.uniform(1.0, 15.0);
  }
  return s;
}

BoundaryData random_boundary(rng::Xoshiro256pp& gen, const Mesh& m) {
  BoundaryData bc;
  for (std::size_t s = 0; s < m.exterior_faces().size(); ++s) bc.theta.push_back(gen.uniform(1.0, 15.0));
  return bc;
}

double max_abs(const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>(); }

// sum_K R_K . phi_K written as the bilinear forms of the scheme, assembled
// face by face for mass/energy fluxes and cell by cell for the stress terms.
double weak_form(const Discretization& d, const State& old, const State& s, double dt,
                 const std::vector<double>& phi_rho, const std::vector<Vec2>& phi_m,
                 const std::vector<double>& phi_e) {
  const Mesh& m = d.mesh();
  const FluidParams& fl = d.fluid();
  const double vol = m.cell_measure();
  const double h = m.h();
  const double alpha = d.params().alpha;
  const double cv = fl.cv();
  const int n = m.num_cells();
  const auto sz = [](int k) { return static_cast<std::size_t>(k); };

  const VectorField u = velocity_field(m, s);
  const ScalarField rho = density_field(m, s);
  const ScalarField theta = temperature_field(m, s, d.boundary());
  ScalarField m1{&m, {}, BoundaryPolicy<double>::copy()};
  ScalarField m2 = m1;
  ScalarField rt = m1;
  for (int k = 0; k < n; ++k) {
    m1.values.push_back(s.rho[sz(k)] * s.u[sz(k)].x());
    m2.values.push_back(s.rho[sz(k)] * s.u[sz(k)].y());
    rt.values.push_back(s.rho[sz(k)] * s.theta[sz(k)]);
  }
  const ScalarField pr{&m, phi_rho, BoundaryPolicy<double>::copy()};
  const ScalarField pe{&m, phi_e, BoundaryPolicy<double>::copy()};
  const VectorField pm{&m, phi_m, BoundaryPolicy<Vec2>::antisymmetric()};

  double w = 0.0;
  const StrainStress ss = strain_and_stress(u, fl.mu, fl.lambda);
  const auto grad_u = grad_h(u);
  const auto sym_phi = strain_and_stress(pm, 0.0, 0.0).strain;
  for (int k = 0; k < n; ++k) {
    const auto i = sz(k);
    const Mat2 total = ss.stress[i] - s.rho[i] * s.theta[i] * Mat2::Identity();
    w += vol * (s.rho[i] - old.rho[i]) / dt * phi_rho[i];
    w += vol * ((s.rho[i] * s.u[i] - old.rho[i] * old.u[i]) / dt - s.rho[i] * fl.g).dot(phi_m[i]);
    w += vol * total.cwiseProduct(sym_phi[i]).sum();
    w += cv * vol * (s.rho[i] * s.theta[i] - old.rho[i] * old.theta[i]) / dt * phi_e[i];
    w -= vol * total.cwiseProduct(grad_u[i]).sum() * phi_e[i];
  }
  for (int f : m.interior_faces()) {
    const Face& sg = m.face(f);
    w -= sg.area * flux_diffusive_upwind(rho, u, sg, h, alpha) * jump(pr, sg);
    w -= sg.area * flux_diffusive_upwind(m1, u, sg, h, alpha) * jump(pm, sg).x();
    w -= sg.area * flux_diffusive_upwind(m2, u, sg, h, alpha) * jump(pm, sg).y();
    w -= sg.area * cv * flux_diffusive_upwind(rt, u, sg, h, alpha) * jump(pe, sg);
    w += fl.kappa / h * sg.area * jump(theta, sg) * jump(pe, sg);
  }
  for (int f : m.exterior_faces()) {
    const Face& sg = m.face(f);
    const double tb = d.boundary().theta[sz(m.exterior_index(f))];
    w += 2.0 * fl.kappa / h * sg.area * (s.theta[sz(sg.in_cell)] - tb) * phi_e[sz(sg.in_cell)];
  }
  return w;
}

}  // namespace

TEST_SUITE("scheme") {

TEST_CASE("constant equilibrium state has zero residual") {
  auto mesh = small_mesh();
  FluidParams fl;
  fl.g = Vec2::Zero();
  BoundaryData bc{std::vector<double>(mesh->exterior_faces().size(), 3.0)};
  const Discretization d(mesh, fl, bc, SchemeParams{});
  const State s = State::uniform(mesh->num_cells(), 1.7, Vec2::Zero(), 3.0);
  Eigen::VectorXd r;
  kernels::residual(d, s, s, 0.05, r, Exec::serial);
  CHECK(max_abs(r) == 0.0);
}

TEST_CASE("gravity alone: momentum residual is -|K| rho g") {
  auto mesh = small_mesh();
  FluidParams fl;
  BoundaryData bc{std::vector<double>(mesh->exterior_faces().size(), 3.0)};
  const Discretization d(mesh, fl, bc, SchemeParams{});
  const State s = State::uniform(mesh->num_cells(), 1.7, Vec2::Zero(), 3.0);
  Eigen::VectorXd r;
  kernels::residual(d, s, s, 0.05, r, Exec::serial);
  for (int k = 0; k < mesh->num_cells(); ++k) {
    CHECK(r[4 * k] == 0.0);
    CHECK(r[4 * k + 1] == doctest::Approx(-mesh->cell_measure() * 1.7 * fl.g.x()));
    CHECK(r[4 * k + 2] == doctest::Approx(-mesh->cell_measure() * 1.7 * fl.g.y()));
  }
}

TEST_CASE("cell-gather kernels agree with the face-scatter reference") {
  rng::Xoshiro256pp gen(21);
  for (int t = 0; t < 10; ++t) {
    auto mesh = small_mesh(4 + 2 * (t % 3), 2 + 2 * (t % 2));
    SchemeParams prm;
    prm.alpha = gen.uniform(-0.9, 0.9);
    const Discretization d(mesh, FluidParams{}, random_boundary(gen, *mesh), prm);
    const State old = random_state(gen, mesh->num_cells());
    const State s = random_state(gen, mesh->num_cells());
    const Eigen::VectorXd ref = reference::residual(d, old, s, 0.03);
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    kernels::residual(d, old, s, 0.03, a, Exec::serial);
    kernels::residual(d, old, s, 0.03, b, Exec::parallel);
    CHECK(max_abs(a - ref) <= 1e-12 * max_abs(ref));
    CHECK(max_abs(a - b) == 0.0);
  }
}

TEST_CASE("residual rows reproduce the weak form for random test functions") {
  rng::Xoshiro256pp gen(22);
  for (int t = 0; t < 10; ++t) {
    auto mesh = small_mesh(6, 4);
    SchemeParams prm;
    prm.alpha = gen.uniform(-0.9, 0.9);
    const Discretization d(mesh, FluidParams{}, random_boundary(gen, *mesh), prm);
    const State old = random_state(gen, mesh->num_cells());
    const State s = random_state(gen, mesh->num_cells());
    Eigen::VectorXd r;
    kernels::residual(d, old, s, 0.04, r, Exec::serial);
    const int n = mesh->num_cells();
    std::vector<double> pr(static_cast<std::size_t>(n));
    std::vector<double> pe(static_cast<std::size_t>(n));
    std::vector<Vec2> pm(static_cast<std::size_t>(n));
    double lhs = 0.0;
    double scale = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      pr[i] = gen.uniform(-1, 1);
      pm[i] = Vec2(gen.uniform(-1, 1), gen.uniform(-1, 1));
      pe[i] = gen.uniform(-1, 1);
      const double terms[] = {r[4 * k] * pr[i], r[4 * k + 1] * pm[i].x(), r[4 * k + 2] * pm[i].y(),
                              r[4 * k + 3] * pe[i]};
      for (double x : terms) {
        lhs += x;
        scale += std::abs(x);
      }
    }
    CHECK(std::abs(lhs - weak_form(d, old, s, 0.04, pr, pm, pe)) <= 1e-12 * scale);
  }
}

TEST_CASE("analytic Jacobian matches central differences") {
  rng::Xoshiro256pp gen(23);
  auto mesh = small_mesh(4, 4);
  SchemeParams prm;
  prm.alpha = 0.3;
  const Discretization d(mesh, FluidParams{}, random_boundary(gen, *mesh), prm);
  const State old = random_state(gen, mesh->num_cells());
  const State s = random_state(gen, mesh->num_cells());
  const double dt = 0.05;
  JacobianPattern jac(d);
  kernels::jacobian(d, s, dt, jac, Exec::serial);
  const Eigen::MatrixXd a = Eigen::MatrixXd(jac.matrix());

  const Eigen::VectorXd x0 = s.pack();
  Eigen::MatrixXd fd(x0.size(), x0.size());
  for (Eigen::Index c = 0; c < x0.size(); ++c) {
    const double eps = 1e-6 * std::max(1.0, std::abs(x0[c]));
    State sp = s;
    State sm = s;
    Eigen::VectorXd xp = x0;
    Eigen::VectorXd xm = x0;
    xp[c] += eps;
    xm[c] -= eps;
    sp.unpack(xp);
    sm.unpack(xm);
    Eigen::VectorXd rp;
    Eigen::VectorXd rm;
    kernels::residual(d, old, sp, dt, rp, Exec::serial);
    kernels::residual(d, old, sm, dt, rm, Exec::serial);
    fd.col(c) = (rp - rm) / (2 * eps);
  }
  CHECK((a - fd).lpNorm<Eigen::Infinity>() <= 1e-6 * fd.lpNorm<Eigen::Infinity>());
}

TEST_CASE("equilibrium data: Newton takes no iterations") {
  auto mesh = small_mesh(8, 4);
  const DataBundle data = equilibrium_data(mesh, FluidParams{}, 1.3, 2.0);
  auto d = std::make_shared<const Discretization>(mesh, data.fluid, data.boundary, SchemeParams{});
  ImplicitSolver solver(d, Exec::serial);
  StepReport rep;
  const State next = solver.solve_step(data.initial, d->time_step(), &rep);
  CHECK(rep.newton_iterations == 0);
  CHECK(next.rho == data.initial.rho);
  CHECK(next.theta == data.initial.theta);
}

TEST_CASE("Rayleigh-Benard step: converged, conservative, positive") {
  auto mesh = small_mesh(16, 8);
  RBConfig cfg = RBConfig::with_seed(1);
  const DataBundle data = rb_data(cfg, RandomModel::none, {}, mesh);
  auto d = std::make_shared<const Discretization>(mesh, data.fluid, data.boundary, SchemeParams{});
  const double dt = d->time_step();
  for (Exec ex : {Exec::serial, Exec::parallel}) {
    ImplicitSolver solver(d, ex);
    StepReport rep;
    const State next = solver.solve_step(data.initial, dt, &rep);
    CHECK(rep.newton_iterations > 0);
    CHECK(rep.residual_norms.back() <= 1e-10 * rep.residual_norms.front());
    double m0 = 0.0;
    double m1 = 0.0;
    for (std::size_t k = 0; k < next.rho.size(); ++k) {
      m0 += data.initial.rho[k];
      m1 += next.rho[k];
      CHECK(next.rho[k] > 0.0);
      CHECK(next.theta[k] > 0.0);
    }
    CHECK(std::abs(m1 - m0) <= 1e-11 * m0);
    Eigen::VectorXd r;
    kernels::residual(*d, data.initial, next, dt, r, Exec::serial);
    CHECK(r.norm() <= 1e-10 * rep.residual_norms.front() * 1.0001);
  }
}

TEST_CASE("Newton failure raises StepFailure with its history") {
  auto mesh = small_mesh(16, 8);
  const DataBundle data = rb_data(RBConfig::with_seed(1), RandomModel::none, {}, mesh);
  SchemeParams prm;
  prm.newton_max_iter = 1;
  auto d = std::make_shared<const Discretization>(mesh, data.fluid, data.boundary, prm);
  ImplicitSolver solver(d, Exec::serial);
  try {
    (void)solver.solve_step(data.initial, d->time_step());
    FAIL("expected StepFailure");
  } catch (const StepFailure& e) {
    CHECK(e.residual_history().size() >= 2);
    CHECK(e.time() == doctest::Approx(d->time_step()));
  }
}

TEST_CASE("step count and shortened last step") {
  CHECK(step_count(1.0, 0.1) == 10);
  CHECK(step_count(0.3, 0.1) == 3);
  CHECK(step_count(0.25, 0.1) == 3);
  CHECK(step_count(0.01, 0.1) == 1);
  CHECK_THROWS_AS(step_count(0.0, 0.1), ConfigError);

  auto mesh = small_mesh(8, 4);
  const DataBundle data = rb_data(RBConfig::with_seed(2), RandomModel::none, {}, mesh);
  RunOptions opt;
  opt.final_time = 0.01;  // dt = 0.05
  opt.exec = Exec::serial;
  const RunResult r = run(data, SchemeParams{}, opt);
  CHECK(r.steps == 1);
  CHECK(r.final_state.t == 0.01);
  CHECK(r.records.size() == 1);
  CHECK(r.records[0].dt == doctest::Approx(0.01));
}

TEST_CASE("equilibrium run stays at the initial state") {
  auto mesh = small_mesh(8, 4);
  const DataBundle data = equilibrium_data(mesh, FluidParams{}, 0.8, 4.0);
  RunOptions opt;
  opt.final_time = 0.5;
  const RunResult r = run(data, SchemeParams{}, opt);
  for (std::size_t k = 0; k < data.initial.rho.size(); ++k) {
    CHECK(std::abs(r.final_state.rho[k] - 0.8) <= 1e-12);
    CHECK(std::abs(r.final_state.theta[k] - 4.0) <= 1e-12);
    CHECK(r.final_state.u[k].norm() <= 1e-12);
  }
  CHECK(r.newton_iterations == 0);
}

TEST_CASE("mirror symmetry in x1 without the perturbation") {
  // With c = 0 and no random terms the data are even in x1 (u1 odd), and the
  // scheme commutes with the reflection i -> nx - 1 - i.
  auto mesh = small_mesh(16, 8);
  RBConfig cfg = RBConfig::with_seed(3);
  cfg.c = 0.0;
  DataBundle data = rb_data(cfg, RandomModel::none, {}, mesh);
  // Break the trivial x1-invariance with an odd horizontal velocity.
  for (int k = 0; k < mesh->num_cells(); ++k) {
    const Vec2 x = mesh->barycenter(k);
    data.initial.u[static_cast<std::size_t>(k)].x() = 0.3 * std::sin(M_PI * x.x() / 2.0) * std::cos(M_PI * x.y() / 2.0);
  }
  RunOptions opt;
  opt.final_time = 0.2;
  opt.exec = Exec::serial;
  opt.diagnostics = false;
  const RunResult r = run(data, SchemeParams{}, opt);
  const State& s = r.final_state;
  double worst = 0.0;
  for (int j = 0; j < mesh->ny(); ++j) {
    for (int i = 0; i < mesh->nx(); ++i) {
      const auto a = static_cast<std::size_t>(mesh->cell_index(i, j));
      const auto b = static_cast<std::size_t>(mesh->cell_index(mesh->nx() - 1 - i, j));
      worst = std::max({worst, std::abs(s.rho[a] - s.rho[b]), std::abs(s.theta[a] - s.theta[b]),
                        std::abs(s.u[a].x() + s.u[b].x()), std::abs(s.u[a].y() - s.u[b].y())});
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("parameter validation") {
  SchemeParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = SchemeParams{};
  p.c_dt = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = SchemeParams{};
  p.newton_tol = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

}
