// Residual and Jacobian assembly: serial reference, cell-gather kernel
// serial and OpenMP-parallel.

#include <benchmark/benchmark.h>

#include <memory>

#include "nsf/rayleigh_benard.hpp"
#include "nsf/scheme.hpp"

using namespace nsf;

namespace {

struct Setup {
  std::shared_ptr<const Mesh> mesh;
  DataBundle data;
  std::unique_ptr<Discretization> disc;
  State trial;
  double dt;

  explicit Setup(int ny) {
    mesh = std::make_shared<const Mesh>(build_mesh(2 * ny, ny, 4.0));
    data = rb_data(RBConfig::with_seed(20240611), RandomModel::none, {}, mesh);
    disc = std::make_unique<Discretization>(mesh, data.fluid, data.boundary, SchemeParams{});
    trial = data.initial;
    for (std::size_t k = 0; k < trial.theta.size(); ++k) trial.theta[k] *= 1.01;
    dt = disc->time_step();
  }
};

void BM_ResidualReference(benchmark::State& st) {
  Setup s(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::residual(*s.disc, s.data.initial, s.trial, s.dt));
  st.SetItemsProcessed(st.iterations() * s.mesh->num_cells());
}

void BM_ResidualKernel(benchmark::State& st, Exec exec) {
  Setup s(static_cast<int>(st.range(0)));
  Eigen::VectorXd out;
  for (auto _ : st) {
    kernels::residual(*s.disc, s.data.initial, s.trial, s.dt, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * s.mesh->num_cells());
}

void BM_Jacobian(benchmark::State& st, Exec exec) {
  Setup s(static_cast<int>(st.range(0)));
  JacobianPattern jac(*s.disc);
  for (auto _ : st) {
    kernels::jacobian(*s.disc, s.trial, s.dt, jac, exec);
    benchmark::DoNotOptimize(jac.matrix().valuePtr());
  }
  st.SetItemsProcessed(st.iterations() * s.mesh->num_cells());
}

}  // namespace

BENCHMARK(BM_ResidualReference)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_ResidualKernel, serial, Exec::serial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_ResidualKernel, parallel, Exec::parallel)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_Jacobian, serial, Exec::serial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_Jacobian, parallel, Exec::parallel)->Arg(16)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
