#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "nsf/mesh.hpp"
#include "nsf/state.hpp"
#include "nsf/thermo.hpp"

namespace nsf {

/// Time stepping and nonlinear/linear solver controls.
struct SchemeParams {
  double alpha = 0.0;            // flux diffusion exponent, -1 < alpha < 1
  double c_dt = 0.1;             // dt = c_dt * h
  double newton_tol = 1e-10;     // relative to the residual of the initial guess
  int newton_max_iter = 50;
  double linear_tol = 1e-6;      // BiCGSTAB relative tolerance (inexact Newton)
  int max_halvings = 30;         // damped-Newton step halvings per iteration
  int direct_solver_limit = 1000;  // unknowns below which sparse LU replaces BiCGSTAB/ILU(0)

  void validate() const;
};

/// Kernel execution mode. `serial` keeps everything on the calling thread.
enum class Exec { serial, parallel };

/// Immutable discretisation shared by solvers, kernels and diagnostics.
class Discretization {
 public:
  struct GradientEntry {
    int cell;
    Vec2 weight;  // (grad_h u)_K = sum_c u_c weight_c^T with {{u}} = 0 on the walls
  };

  Discretization(std::shared_ptr<const Mesh> mesh, FluidParams fluid, BoundaryData boundary,
                 SchemeParams params);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  const FluidParams& fluid() const noexcept { return fluid_; }
  const BoundaryData& boundary() const noexcept { return boundary_; }
  const SchemeParams& params() const noexcept { return params_; }

  double time_step() const noexcept { return params_.c_dt * mesh_->h(); }
  /// h^alpha
  double flux_diffusion() const noexcept { return flux_diffusion_; }
  int num_unknowns() const noexcept { return kVarsPerCell * mesh_->num_cells(); }

  std::span<const GradientEntry> gradient_stencil(int cell) const;

  /// Cells whose unknowns enter the residual rows of `cell` (sorted).
  std::span<const int> coupled_cells(int cell) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  FluidParams fluid_;
  BoundaryData boundary_;
  SchemeParams params_;
  double flux_diffusion_;
  std::vector<int> grad_offsets_;
  std::vector<GradientEntry> grad_entries_;
  std::vector<int> coupling_offsets_;
  std::vector<int> coupling_cells_;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Jacobian storage with the fixed block sparsity of the scheme.
class JacobianPattern {
 public:
  explicit JacobianPattern(const Discretization& disc);

  SparseMatrix& matrix() noexcept { return matrix_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }

  /// Storage offset of entry (4*row_cell + row_var, 4*col_cell + col_var);
  /// `slot` is the position of col_cell in coupled_cells(row_cell).
  int position(int row_cell, int slot, int row_var, int col_var) const;

  void set_zero();

 private:
  SparseMatrix matrix_;
  std::vector<int> slot_offsets_;  // per (row cell, slot): outer[4c] + 4*index of row cell in c's list
  std::vector<int> row_slot_begin_;
  std::vector<int> col_stride_;    // per column cell: 4 * |coupled_cells(c)|
};

namespace kernels {

/// Residual of the implicit system for one step, assembled cell by cell
/// (each thread owns the rows of its cells, so no reductions are needed).
/// Rows per cell: mass, momentum x1, momentum x2, internal energy.
void residual(const Discretization& disc, const State& old, const State& trial, double dt,
              Eigen::VectorXd& out, Exec exec = Exec::parallel);

/// Analytic Jacobian of `residual` w.r.t. (rho, u1, u2, theta) of `trial`,
/// with the upwind direction frozen at the current iterate.
void jacobian(const Discretization& disc, const State& trial, double dt, JacobianPattern& jac,
              Exec exec = Exec::parallel);

}  // namespace kernels

namespace reference {

/// Serial face-by-face assembly of the same residual. Kept as the reference
/// implementation for the cell-gather kernels.
Eigen::VectorXd residual(const Discretization& disc, const State& old, const State& trial,
                         double dt);

}  // namespace reference

/// Per-step Newton record.
struct StepReport {
  int newton_iterations = 0;
  int halvings = 0;
  int linear_iterations = 0;
  std::vector<double> residual_norms;
};

/// Damped Newton solver for one backward-Euler step. Owns its workspace;
/// not shareable between threads.
class ImplicitSolver {
 public:
  explicit ImplicitSolver(std::shared_ptr<const Discretization> disc, Exec exec = Exec::parallel);
  ~ImplicitSolver();
  ImplicitSolver(const ImplicitSolver&) = delete;
  ImplicitSolver& operator=(const ImplicitSolver&) = delete;

  const Discretization& discretization() const noexcept { return *disc_; }

  /// Advances `old` by dt. Throws StepFailure or PositivityFailure.
  State solve_step(const State& old, double dt, StepReport* report = nullptr);

 private:
  struct LinearWorkspace;

  std::shared_ptr<const Discretization> disc_;
  Exec exec_;
  JacobianPattern jac_;
  std::unique_ptr<LinearWorkspace> linear_;
};

}  // namespace nsf
