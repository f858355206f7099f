// Acceptance gate. Usage: nsf_acceptance <criterion>... (1..7, or "all").
// One PASS/FAIL line per criterion; exit status 1 if any criterion fails.

#include <omp.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsf/cli.hpp"
#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/io.hpp"
#include "nsf/rayleigh_benard.hpp"
#include "nsf/simulation.hpp"
#include "nsf/uq.hpp"
#include "operator_suite.hpp"

using namespace nsf;
namespace fs = std::filesystem;

namespace {

// Tolerances, pinned.
constexpr double kOperatorTol = 1e-12;
constexpr int kOperatorInstances = 200;
constexpr double kOperatorSeconds = 10.0;
constexpr double kEquilibriumDrift = 1e-9;
constexpr double kEquilibriumBalance = 1e-9;
constexpr double kScRateLo = 0.7;
constexpr double kScRateHi = 1.3;
constexpr double kScDevRateMin = 0.4;
constexpr double kMcRateLo = 0.3;
constexpr double kMcRateHi = 0.7;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(int id, bool pass, const std::string& what) {
  std::printf("CRITERION %d %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  return pass;
}

void detail(const char* fmt, double a, double b) {
  std::printf("    ");
  std::printf(fmt, a, b);
  std::printf("\n");
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::shared_ptr<const Mesh> strip(int nx, int ny) {
  return std::make_shared<const Mesh>(build_mesh(nx, ny, 4.0));
}

int ensemble_threads() { return std::max(1, omp_get_max_threads()); }

bool criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = testing::run_operator_suite(kOperatorInstances, 20240611);
  const double secs = seconds_since(t0);
  bool ok = secs < kOperatorSeconds;
  for (const auto& r : results) {
    std::printf("    %-36s max rel error %.3e over %d instances\n", r.name.c_str(), r.max_rel_error, r.instances);
    ok = ok && r.max_rel_error <= kOperatorTol && r.instances == kOperatorInstances;
  }
  return report(1, ok, fmt("operator suite, tol %.0e, runtime %.2f s (limit %.0f s)", kOperatorTol, secs,
                           kOperatorSeconds));
}

bool criterion2() {
  const auto mesh = strip(32, 16);
  const DataBundle data = equilibrium_data(mesh, FluidParams{}, 1.0, 1.0);
  RunOptions opt;
  opt.final_time = 1.0;
  const RunResult r = run(data, SchemeParams{}, opt);
  double drift = 0.0;
  for (std::size_t k = 0; k < data.initial.rho.size(); ++k) {
    drift = std::max({drift, std::abs(r.final_state.rho[k] - data.initial.rho[k]),
                      std::abs(r.final_state.theta[k] - data.initial.theta[k]), r.final_state.u[k].norm()});
  }
  double balance = 0.0;
  for (const auto& rec : r.records) {
    const double terms[] = {rec.energy_closure, rec.dissipation, rec.entropy_production, rec.heat_flux,
                            rec.work, rec.jump_dissipation, rec.ballistic_viscous, rec.ballistic_heat,
                            (rec.mass - r.initial_mass) / r.initial_mass};
    for (double x : terms) balance = std::isnan(x) ? x : std::max(balance, std::abs(x));
  }
  detail("state drift (max norm) %.3e  limit %.0e", drift, kEquilibriumDrift);
  detail("worst balance residual %.3e  limit %.0e", balance, kEquilibriumBalance);
  const bool ok = drift <= kEquilibriumDrift && balance <= kEquilibriumBalance &&
                  r.steps == step_count(opt.final_time, SchemeParams{}.c_dt * mesh->h());
  return report(2, ok, fmt("equilibrium fixed point, 32x16, T = 1, %g steps", r.steps));
}

bool criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto mesh = strip(64, 32);
  const RBConfig cfg = RBConfig::with_seed(20240611);
  const DataBundle data = rb_data(cfg, RandomModel::none, {}, mesh);
  SchemeParams prm;
  prm.alpha = 0.0;
  prm.c_dt = 0.1;
  RunOptions opt;
  opt.final_time = 1.0;
  opt.exec = Exec::serial;
  const RunResult r = run(data, prm, opt);
  const double secs = seconds_since(t0);

  bool ok = r.steps == step_count(opt.final_time, prm.c_dt * mesh->h());
  for (const auto& c : balance_checks(r.records, r.initial_mass, prm.newton_tol)) {
    std::printf("    %-4s %-28s worst %.3e  limit %.3e\n", c.pass ? "ok" : "MISS", c.name.c_str(), c.worst, c.limit);
    ok = ok && c.pass;
  }
  return report(3, ok, fmt("Rayleigh-Benard 64x32, T = 1, per-step balances, %.1f s single-threaded", secs));
}

bool criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  EnsembleSettings s;
  s.x1_extent = 4.0;
  s.final_time = 0.5;
  s.rb = RBConfig::with_seed(20240611);
  s.threads = ensemble_threads();
  ScLadder ladder;  // (ny, n) = (16, 2), (32, 4), (64, 8); reference (128, 16)
  const ConvergenceTable t = sc_convergence(s, ladder);
  const double secs = seconds_since(t0);
  write_convergence_csv("acceptance_sc_convergence.csv", t);
  write_rates_csv("acceptance_sc_rates.csv", t);
  bool ok = true;
  for (Quantity q : kQuantities) {
    const auto i = static_cast<std::size_t>(q);
    std::printf("    %-6s rate E1 %.3f  rate E2 %.3f\n", quantity_name(q), t.rate_e1[i], t.rate_e2[i]);
    ok = ok && t.rate_e1[i] >= kScRateLo && t.rate_e1[i] <= kScRateHi && t.rate_e2[i] >= kScDevRateMin;
  }
  return report(4, ok, fmt("collocation ladder, E1 rate in [%.1f, %.1f], E2 rate >= %.1f", kScRateLo, kScRateHi,
                           kScDevRateMin) +
                           fmt(", %.0f s on %g worker(s)", secs, s.threads));
}

struct McRun {
  McConvergence result;
  double seconds = 0.0;
  int threads = 1;
};

const McRun& mc_run() {
  static std::optional<McRun> cache;
  if (!cache) {
    const auto t0 = std::chrono::steady_clock::now();
    EnsembleSettings s;
    s.nx = 32;
    s.ny = 16;
    s.final_time = 0.5;
    s.rb = RBConfig::with_seed(20240611);
    s.threads = ensemble_threads();
    McLadder ladder;  // M = 4, 8, 16, 32; K = 5; reference M = 128
    cache = McRun{mc_convergence(s, ladder), 0.0, s.threads};
    cache->seconds = seconds_since(t0);
    write_convergence_csv("acceptance_mc_convergence.csv", cache->result.table);
    write_rates_csv("acceptance_mc_rates.csv", cache->result.table);
  }
  return *cache;
}

bool criterion5() {
  const McRun& run = mc_run();
  const ConvergenceTable& t = run.result.table;
  bool ok = true;
  for (Quantity q : kQuantities) {
    const auto i = static_cast<std::size_t>(q);
    std::printf("    %-6s rate E1 %.3f  rate E2 %.3f\n", quantity_name(q), t.rate_e1[i], t.rate_e2[i]);
    ok = ok && t.rate_e1[i] >= kMcRateLo && t.rate_e1[i] <= kMcRateHi;
  }
  return report(5, ok, fmt("Monte Carlo rate, E1 rate in [%.1f, %.1f]", kMcRateLo, kMcRateHi) +
                           fmt(", %.0f s on %g worker(s)", run.seconds, run.threads));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"nsf-uq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

bool criterion6() {
  const fs::path dir = fs::temp_directory_path() / ("nsf_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream(dir / "config.json")
        << R"({"mesh": {"nx": 32, "ny": 16, "x1_extent": 4}, "final_time": 0.5, "threads": 1})";
  }
  // Run once from the config, then twice from the recorded metadata.
  const int a = cli({"deterministic", "--config", (dir / "config.json").string(), "--out", (dir / "a").string(),
                     "--threads", "1"});
  const int b = cli({"deterministic", "--config", (dir / "a" / "metadata.json").string(), "--out",
                     (dir / "b").string(), "--threads", "1"});
  const int c = cli({"deterministic", "--config", (dir / "a" / "metadata.json").string(), "--out",
                     (dir / "c").string(), "--threads", "1"});
  const std::string ca = slurp(dir / "a" / "diagnostics.csv");
  const bool replay = a == 0 && b == 0 && c == 0 && !ca.empty() && ca == slurp(dir / "b" / "diagnostics.csv") &&
                      ca == slurp(dir / "c" / "diagnostics.csv");
  std::printf("    serial replay from metadata: diagnostics CSVs %s (%zu bytes)\n",
              replay ? "byte-identical" : "DIFFER", ca.size());

  EnsembleSettings s;
  s.nx = 16;
  s.ny = 8;
  s.final_time = 0.25;
  s.rb = RBConfig::with_seed(20240611);
  const auto serial = run_mc(s, 6, 2, 2024);
  s.threads = 4;
  const auto parallel = run_mc(s, 6, 2, 2024);
  bool same = serial.size() == parallel.size();
  for (std::size_t k = 0; same && k < serial.size(); ++k) {
    for (Quantity q : kQuantities) {
      same = same && serial[k].stats[q].mean == parallel[k].stats[q].mean &&
             serial[k].stats[q].variance == parallel[k].stats[q].variance &&
             serial[k].stats[q].mad == parallel[k].stats[q].mad;
    }
  }
  std::printf("    ensemble statistics, 1 vs 4 threads: %s\n", same ? "bitwise identical" : "DIFFER");
  std::error_code ec;
  fs::remove_all(dir, ec);
  return report(6, replay && same, "determinism and replay");
}

bool criterion7() {
  const McRun& run = mc_run();
  const TailReport tail = lambda_tail(run.result.lambda, {2.0, 5.0, 10.0, 15.0, 20.0, 30.0, 50.0});
  write_tail_csv("acceptance_mc_tail.csv", tail);
  for (std::size_t i = 0; i < tail.thresholds.size(); ++i) {
    std::printf("    P(Lambda > %g) = %.4f\n", tail.thresholds[i], tail.fraction[i]);
  }
  const bool ok = tail.samples > 0 && tail.monotone() && run.result.all_positive;
  return report(7, ok, fmt("Lambda tail monotone over %g samples, all samples positive: ", tail.samples) +
                           (run.result.all_positive ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<bool()>> criteria{
      {"1", criterion1}, {"2", criterion2}, {"3", criterion3}, {"4", criterion4},
      {"5", criterion5}, {"6", criterion6}, {"7", criterion7}};
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
    wanted.clear();
    for (const auto& [k, fn] : criteria) wanted.push_back(k);
  }
  bool ok = true;
  for (const auto& w : wanted) {
    const auto it = criteria.find(w);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion '%s'\n", w.c_str());
      return 2;
    }
    try {
      ok = it->second() && ok;
    } catch (const std::exception& e) {
      report(std::stoi(w), false, std::string("exception: ") + e.what());
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
