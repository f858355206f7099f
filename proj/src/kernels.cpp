// Cell-gather residual and Jacobian kernels. Every cell writes only its own
// rows, so the OpenMP loops need no atomics and the result does not depend on
// the thread count.

#include <algorithm>
#include <span>

#include "nsf/scheme.hpp"

namespace nsf::kernels {

namespace {

struct CellTensors {
  std::vector<Mat2> grad;    // grad_h u
  std::vector<Mat2> stress;  // S - p I
};

CellTensors cell_tensors(const Discretization& disc, const State& s, Exec exec) {
  const int n = disc.mesh().num_cells();
  const double mu = disc.fluid().mu;
  const double lambda = disc.fluid().lambda;
  CellTensors out;
  out.grad.resize(static_cast<std::size_t>(n));
  out.stress.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int k = 0; k < n; ++k) {
    Mat2 g = Mat2::Zero();
    for (const auto& e : disc.gradient_stencil(k)) {
      g += s.u[static_cast<std::size_t>(e.cell)] * e.weight.transpose();
    }
    const Mat2 d = 0.5 * (g + g.transpose());
    const double p = s.rho[static_cast<std::size_t>(k)] * s.theta[static_cast<std::size_t>(k)];
    const auto i = static_cast<std::size_t>(k);
    out.grad[i] = g;
    out.stress[i] = 2.0 * mu * d + (lambda * g.trace() - p) * Mat2::Identity();
  }
  return out;
}

inline int slot_of(std::span<const int> coupled, int cell) {
  const auto it = std::lower_bound(coupled.begin(), coupled.end(), cell);
  return static_cast<int>(it - coupled.begin());
}

}  // namespace

void residual(const Discretization& disc, const State& old, const State& trial, double dt,
              Eigen::VectorXd& out, Exec exec) {
  const Mesh& mesh = disc.mesh();
  const int n = mesh.num_cells();
  const FluidParams& fl = disc.fluid();
  const double cv = fl.cv();
  const double vol = mesh.cell_measure();
  const double beta = disc.flux_diffusion();
  const double cond = fl.kappa / mesh.h();
  const CellTensors ct = cell_tensors(disc, trial, exec);
  out.resize(kVarsPerCell * n);

#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int k = 0; k < n; ++k) {
    const auto ik = static_cast<std::size_t>(k);
    const double rk = trial.rho[ik];
    const Vec2& uk = trial.u[ik];
    const double tk = trial.theta[ik];

    double r_mass = vol * (rk - old.rho[ik]) / dt;
    Vec2 r_mom = vol * (rk * uk - old.rho[ik] * old.u[ik]) / dt - vol * rk * fl.g;
    double r_en = cv * vol * (rk * tk - old.rho[ik] * old.theta[ik]) / dt -
                  vol * (ct.stress[ik].array() * ct.grad[ik].array()).sum();

    for (const CellFace& cf : mesh.cell_faces(k)) {
      const Face& sigma = mesh.face(cf.face);
      if (!sigma.interior()) {
        const int slot = mesh.exterior_index(sigma.id);
        r_en += 2.0 * cond * sigma.area * (tk - disc.boundary().theta[static_cast<std::size_t>(slot)]);
        continue;
      }
      const auto a = static_cast<std::size_t>(sigma.in_cell);
      const auto b = static_cast<std::size_t>(sigma.out_cell);
      const Vec2& nrm = sigma.normal;
      const double un = 0.5 * (trial.u[a] + trial.u[b]).dot(nrm);
      const std::size_t up = un >= 0.0 ? a : b;
      const double ra = trial.rho[a];
      const double rb = trial.rho[b];

      const double f_mass = trial.rho[up] * un - beta * (rb - ra);
      const Vec2 f_mom = trial.rho[up] * trial.u[up] * un - beta * (rb * trial.u[b] - ra * trial.u[a]);
      const double f_en = trial.rho[up] * trial.theta[up] * un -
                          beta * (rb * trial.theta[b] - ra * trial.theta[a]);
      const double w = cf.sign * sigma.area;
      r_mass += w * f_mass;
      r_mom += w * f_mom;
      r_en += cv * w * f_en;

      const std::size_t other = cf.sign > 0 ? b : a;
      r_en += cond * sigma.area * (tk - trial.theta[other]);
      r_mom += 0.5 * sigma.area * (ct.stress[a] - ct.stress[b]) * nrm;
    }

    out[4 * k + 0] = r_mass;
    out[4 * k + 1] = r_mom.x();
    out[4 * k + 2] = r_mom.y();
    out[4 * k + 3] = r_en;
  }
}

void jacobian(const Discretization& disc, const State& trial, double dt, JacobianPattern& jac,
              Exec exec) {
  const Mesh& mesh = disc.mesh();
  const int n = mesh.num_cells();
  const FluidParams& fl = disc.fluid();
  const double cv = fl.cv();
  const double mu = fl.mu;
  const double lambda = fl.lambda;
  const double vol = mesh.cell_measure();
  const double beta = disc.flux_diffusion();
  const double cond = fl.kappa / mesh.h();
  const CellTensors ct = cell_tensors(disc, trial, exec);
  double* values = jac.matrix().valuePtr();

#pragma omp parallel if (exec == Exec::parallel)
  {
  // Row block of cell k, 4x4 per coupled cell, scattered once at the end.
  std::vector<double> block;
#pragma omp for schedule(static)
  for (int k = 0; k < n; ++k) {
    const auto ik = static_cast<std::size_t>(k);
    const auto coupled = disc.coupled_cells(k);
    block.assign(kVarsPerCell * kVarsPerCell * coupled.size(), 0.0);
    auto slot = [&](int cell) { return slot_of(coupled, cell); };
    auto put = [&](int row_var, int s, int col_var, double v) {
      block[static_cast<std::size_t>((s * kVarsPerCell + row_var) * kVarsPerCell + col_var)] += v;
    };
    auto add = [&](int row_var, int cell, int col_var, double v) { put(row_var, slot(cell), col_var, v); };

    const double rk = trial.rho[ik];
    const Vec2& uk = trial.u[ik];
    const double tk = trial.theta[ik];

    // Time derivative and gravity.
    add(0, k, 0, vol / dt);
    for (int i = 0; i < 2; ++i) {
      add(1 + i, k, 0, vol * uk[i] / dt - vol * fl.g[i]);
      add(1 + i, k, 1 + i, vol * rk / dt);
    }
    add(3, k, 0, cv * vol * tk / dt);
    add(3, k, 3, cv * vol * rk / dt);

    // -|K| (S - pI) : grad_h u
    {
      const Mat2& g = ct.grad[ik];
      const Mat2 d = 0.5 * (g + g.transpose());
      const double tr = g.trace();
      const double p = rk * tk;
      const Mat2 m = 4.0 * mu * d + (2.0 * lambda * tr - p) * Mat2::Identity();
      for (const auto& e : disc.gradient_stencil(k)) {
        const Vec2 dv = m * e.weight;
        const int se = slot(e.cell);
        put(3, se, 1, -vol * dv.x());
        put(3, se, 2, -vol * dv.y());
      }
      add(3, k, 0, vol * tk * tr);
      add(3, k, 3, vol * rk * tr);
    }

    for (const CellFace& cf : mesh.cell_faces(k)) {
      const Face& sigma = mesh.face(cf.face);
      if (!sigma.interior()) {
        add(3, k, 3, 2.0 * cond * sigma.area);
        continue;
      }
      const int ca = sigma.in_cell;
      const int cb = sigma.out_cell;
      const auto a = static_cast<std::size_t>(ca);
      const auto b = static_cast<std::size_t>(cb);
      const Vec2& nrm = sigma.normal;
      const double un = 0.5 * (trial.u[a] + trial.u[b]).dot(nrm);
      const int cup = un >= 0.0 ? ca : cb;
      const auto up = static_cast<std::size_t>(cup);
      const double w = cf.sign * sigma.area;
      const double rup = trial.rho[up];
      const Vec2& uup = trial.u[up];
      const double tup = trial.theta[up];

      // Upwind transport parts.
      add(0, cup, 0, w * un);
      for (int i = 0; i < 2; ++i) {
        add(1 + i, cup, 0, w * uup[i] * un);
        add(1 + i, cup, 1 + i, w * rup * un);
      }
      add(3, cup, 0, cv * w * tup * un);
      add(3, cup, 3, cv * w * rup * un);
      for (int cell : {ca, cb}) {
        for (int j = 0; j < 2; ++j) {
          const double dn = 0.5 * nrm[j];
          add(0, cell, 1 + j, w * dn * rup);
          for (int i = 0; i < 2; ++i) add(1 + i, cell, 1 + j, w * dn * rup * uup[i]);
          add(3, cell, 1 + j, cv * w * dn * rup * tup);
        }
      }

      // -h^alpha [[r]] parts.
      add(0, ca, 0, w * beta);
      add(0, cb, 0, -w * beta);
      for (int i = 0; i < 2; ++i) {
        add(1 + i, ca, 0, w * beta * trial.u[a][i]);
        add(1 + i, ca, 1 + i, w * beta * trial.rho[a]);
        add(1 + i, cb, 0, -w * beta * trial.u[b][i]);
        add(1 + i, cb, 1 + i, -w * beta * trial.rho[b]);
      }
      add(3, ca, 0, cv * w * beta * trial.theta[a]);
      add(3, ca, 3, cv * w * beta * trial.rho[a]);
      add(3, cb, 0, -cv * w * beta * trial.theta[b]);
      add(3, cb, 3, -cv * w * beta * trial.rho[b]);

      // Heat conduction.
      const int other = cf.sign > 0 ? cb : ca;
      add(3, k, 3, cond * sigma.area);
      add(3, other, 3, -cond * sigma.area);

      // 1/2 |sigma| (T_a - T_b) n
      for (int side = 0; side < 2; ++side) {
        const int cx = side == 0 ? ca : cb;
        const auto x = static_cast<std::size_t>(cx);
        const double sgn = (side == 0 ? 0.5 : -0.5) * sigma.area;
        for (const auto& e : disc.gradient_stencil(cx)) {
          const double wn = e.weight.dot(nrm);
          const int se = slot(e.cell);
          for (int i = 0; i < 2; ++i) {
            Vec2 col = lambda * e.weight[i] * nrm + mu * e.weight * nrm[i];
            col[i] += mu * wn;
            put(1, se, 1 + i, sgn * col.x());
            put(2, se, 1 + i, sgn * col.y());
          }
        }
        add(1, cx, 0, -sgn * trial.theta[x] * nrm.x());
        add(2, cx, 0, -sgn * trial.theta[x] * nrm.y());
        add(1, cx, 3, -sgn * trial.rho[x] * nrm.x());
        add(2, cx, 3, -sgn * trial.rho[x] * nrm.y());
      }
    }

    for (std::size_t s = 0; s < coupled.size(); ++s) {
      for (int rv = 0; rv < kVarsPerCell; ++rv) {
        for (int c = 0; c < kVarsPerCell; ++c) {
          values[jac.position(k, static_cast<int>(s), rv, c)] = block[(s * kVarsPerCell + rv) * kVarsPerCell + c];
        }
      }
    }
  }
  }
}

}  // namespace nsf::kernels
