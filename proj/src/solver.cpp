#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "nsf/errors.hpp"
#include "nsf/ilu0.hpp"
#include "nsf/scheme.hpp"

namespace nsf {

struct ImplicitSolver::LinearWorkspace {
  bool direct = true;
  bool analyzed = false;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  Eigen::BiCGSTAB<SparseMatrix, Ilu0> krylov;

  Eigen::VectorXd direct_solve(const SparseMatrix& a, const Eigen::VectorXd& rhs) {
    if (!analyzed) {
      lu.analyzePattern(a);
      analyzed = true;
    }
    lu.factorize(a);
    if (lu.info() != Eigen::Success) return {};
    return lu.solve(rhs);
  }
};

ImplicitSolver::ImplicitSolver(std::shared_ptr<const Discretization> disc, Exec exec)
    : disc_(std::move(disc)), exec_(exec), jac_(*disc_), linear_(std::make_unique<LinearWorkspace>()) {
  linear_->direct = disc_->num_unknowns() < disc_->params().direct_solver_limit;
  linear_->krylov.setTolerance(disc_->params().linear_tol);
  linear_->krylov.setMaxIterations(500);
}

ImplicitSolver::~ImplicitSolver() = default;

namespace {

// Magnitude of the accumulation terms; sets the roundoff floor of the residual.
double residual_scale(const Discretization& disc, const State& s, double dt) {
  const double vol = disc.mesh().cell_measure();
  const double cv = disc.fluid().cv();
  double acc = 0.0;
  for (int k = 0; k < s.num_cells(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double r = s.rho[i];
    acc += r * r * (1.0 + s.u[i].squaredNorm()) + std::pow(cv * r * s.theta[i], 2);
  }
  return vol / dt * std::sqrt(acc);
}

}  // namespace

State ImplicitSolver::solve_step(const State& old, double dt, StepReport* report) {
  const Discretization& disc = *disc_;
  const SchemeParams& prm = disc.params();
  const double t_new = old.t + dt;

  State trial = old;
  trial.t = t_new;
  Eigen::VectorXd x = old.pack();
  Eigen::VectorXd res;
  kernels::residual(disc, old, trial, dt, res, exec_);
  double rnorm = res.norm();
  std::vector<double> history{rnorm};

  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * residual_scale(disc, old, dt);
  const double target = std::max(prm.newton_tol * rnorm, floor);

  StepReport local;
  Eigen::VectorXd delta;
  Eigen::VectorXd x_try;
  Eigen::VectorXd res_try;
  State candidate = trial;

  int iter = 0;
  while (rnorm > target) {
    if (iter == prm.newton_max_iter) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << prm.newton_max_iter << " iterations at t = " << t_new
          << " (residual " << rnorm << ", target " << target << ")";
      throw StepFailure(msg.str(), t_new, history);
    }
    kernels::jacobian(disc, trial, dt, jac_, exec_);
    const SparseMatrix& jm = jac_.matrix();
    bool solved = false;
    if (!linear_->direct) {
      // The ILU(0) factors are refreshed once per step and reused by later
      // Newton iterations unless the Krylov solve stalls with them.
      for (bool refresh : {iter == 0, true}) {
        if (refresh) {
          linear_->krylov.compute(jm);
        } else {
          linear_->krylov.analyzePattern(jm);
        }
        if (linear_->krylov.preconditioner().info() != Eigen::Success) break;
        delta = linear_->krylov.solve(-res);
        local.linear_iterations += static_cast<int>(linear_->krylov.iterations());
        solved = linear_->krylov.info() == Eigen::Success;
        if (solved || refresh) break;
      }
    }
    if (!solved) {
      // Small systems, or Krylov breakdown: sparse LU.
      delta = linear_->direct_solve(jm, -res);
      if (delta.size() != res.size()) {
        throw StepFailure("sparse LU factorisation failed: " + linear_->lu.lastErrorMessage(), t_new,
                          history);
      }
    }

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= prm.max_halvings; ++halving) {
      x_try = x + lambda * delta;
      candidate.unpack(x_try);
      if (candidate.admissible()) {
        kernels::residual(disc, old, candidate, dt, res_try, exec_);
        const double rn = res_try.norm();
        if (std::isfinite(rn) && rn <= (1.0 - 1e-4 * lambda) * rnorm) {
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
      ++local.halvings;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "line search failed at t = " << t_new << " (residual " << rnorm << ")";
      throw StepFailure(msg.str(), t_new, history);
    }
    x.swap(x_try);
    res.swap(res_try);
    trial.unpack(x);
    rnorm = res.norm();
    history.push_back(rnorm);
    ++iter;
  }

  if (!trial.admissible()) {
    std::ostringstream msg;
    msg << "nonpositive density or temperature at t = " << t_new;
    throw PositivityFailure(msg.str(), t_new);
  }
  local.newton_iterations = iter;
  local.residual_norms = std::move(history);
  if (report) *report = std::move(local);
  return trial;
}

}  // namespace nsf
