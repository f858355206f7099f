#include "nsf/cli.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nsf/config.hpp"
#include "nsf/errors.hpp"
#include "nsf/io.hpp"
#include "nsf/rayleigh_benard.hpp"
#include "nsf/simulation.hpp"
#include "nsf/version.hpp"

namespace nsf {

namespace fs = std::filesystem;

namespace {

void write_metadata(const fs::path& dir, const RunConfig& cfg) {
  auto j = nlohmann::json::parse(config_to_json(cfg));
  j["version"] = kVersion;
  const fs::path path = dir / "metadata.json";
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("cannot write " + path.string());
}

std::string snapshot_name(int step) {
  std::ostringstream os;
  os << "snapshot_" << std::setw(5) << std::setfill('0') << step << ".vtk";
  return os.str();
}

DataBundle make_data(const RunConfig& cfg) {
  auto mesh = std::make_shared<const Mesh>(build_mesh(cfg.nx, cfg.ny, cfg.x1_extent));
  if (cfg.data == DataKind::equilibrium) {
    return equilibrium_data(mesh, cfg.rb.fluid, cfg.equilibrium_rho, cfg.equilibrium_theta);
  }
  return rb_data(cfg.rb, RandomModel::none, {}, mesh);
}

EnsembleSettings ensemble_settings(const RunConfig& cfg) {
  EnsembleSettings s;
  s.nx = cfg.nx;
  s.ny = cfg.ny;
  s.x1_extent = cfg.x1_extent;
  s.final_time = cfg.final_time;
  s.scheme = cfg.scheme;
  s.rb = cfg.rb;
  s.threads = cfg.threads;
  return s;
}

RunResult run_deterministic(const RunConfig& cfg, const DataBundle& data, bool write_fields) {
  RunOptions opt;
  opt.final_time = cfg.final_time;
  opt.exec = cfg.threads > 1 ? Exec::parallel : Exec::serial;
  opt.diagnostics = true;
  if (write_fields) {
    const Mesh& mesh = *data.mesh;
    write_vtk(cfg.out_dir / snapshot_name(0), mesh, state_fields(data.initial), "t=0");
    if (cfg.snapshot_every > 0) {
      opt.on_step = [&](int step, const State& s, const DiagnosticsRecord*) {
        if (step % cfg.snapshot_every == 0) {
          std::ostringstream title;
          title << "t=" << std::setprecision(17) << s.t;
          write_vtk(cfg.out_dir / snapshot_name(step), mesh, state_fields(s), title.str());
        }
      };
    }
  }
  return run(data, cfg.scheme, opt);
}

int mode_deterministic(const RunConfig& cfg) {
  const DataBundle data = make_data(cfg);
  const RunResult r = run_deterministic(cfg, data, true);
  const Mesh& mesh = *data.mesh;
  write_diagnostics_csv(cfg.out_dir / "diagnostics.csv", r.records);
  write_vtk(cfg.out_dir / "final.vtk", mesh, state_fields(r.final_state), "final");
  write_line_profiles(cfg.out_dir / "lines.csv", mesh, state_fields(r.final_state), cfg.line_ordinates);
  std::cout << "steps " << r.steps << ", newton iterations " << r.newton_iterations
            << ", sup Lambda " << r.lambda_max << '\n';
  return kExitOk;
}

int mode_verify(const RunConfig& cfg) {
  const DataBundle data = make_data(cfg);
  const RunResult r = run_deterministic(cfg, data, false);
  write_diagnostics_csv(cfg.out_dir / "diagnostics.csv", r.records);
  const auto checks = balance_checks(r.records, r.initial_mass, cfg.scheme.newton_tol);
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%-4s %-28s worst %+.3e  limit %+.3e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.worst, c.limit);
    ok = ok && c.pass;
  }
  return ok ? kExitOk : kExitVerify;
}

void write_ensemble(const RunConfig& cfg, const EnsembleResult& e, const std::string& suffix) {
  const Mesh& mesh = *e.stats.mesh;
  const auto fields = stats_fields(e.stats);
  write_vtk(cfg.out_dir / ("stats" + suffix + ".vtk"), mesh, fields, "ensemble statistics");
  write_line_profiles(cfg.out_dir / ("lines" + suffix + ".csv"), mesh, fields, cfg.line_ordinates);
}

void write_tail(const RunConfig& cfg, const std::vector<SampleResult>& samples) {
  std::vector<double> lambdas;
  for (const auto& s : samples) lambdas.push_back(s.lambda_max);
  write_tail_csv(cfg.out_dir / "tail.csv", lambda_tail(lambdas, cfg.lambda_thresholds));
}

int mode_sc(const RunConfig& cfg) {
  const EnsembleResult e = run_sc(ensemble_settings(cfg), cfg.sc_points, cfg.param_lo, cfg.param_hi);
  write_ensemble(cfg, e, "");
  write_samples_csv(cfg.out_dir / "samples.csv", e.samples);
  write_tail(cfg, e.samples);
  return kExitOk;
}

int mode_mc(const RunConfig& cfg) {
  const auto groups = run_mc(ensemble_settings(cfg), cfg.mc_members, cfg.mc_groups, cfg.mc_seed);
  std::vector<SampleResult> all;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    write_ensemble(cfg, groups[k], "_group" + std::to_string(k));
    all.insert(all.end(), groups[k].samples.begin(), groups[k].samples.end());
  }
  write_samples_csv(cfg.out_dir / "samples.csv", all);
  write_tail(cfg, all);
  return kExitOk;
}

int mode_convergence(const RunConfig& cfg) {
  const EnsembleSettings settings = ensemble_settings(cfg);
  ConvergenceTable table;
  if (cfg.ladder == "sc") {
    table = sc_convergence(settings, cfg.sc_ladder);
  } else {
    const McConvergence mc = mc_convergence(settings, cfg.mc_ladder);
    table = mc.table;
    write_tail_csv(cfg.out_dir / "tail.csv", lambda_tail(mc.lambda, cfg.lambda_thresholds));
  }
  write_convergence_csv(cfg.out_dir / "convergence.csv", table);
  write_rates_csv(cfg.out_dir / "rates.csv", table);
  for (Quantity q : kQuantities) {
    const auto i = static_cast<std::size_t>(q);
    std::printf("%-6s rate E1 %.3f  rate E2 %.3f\n", quantity_name(q), table.rate_e1[i], table.rate_e2[i]);
  }
  return kExitOk;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.mode != RunMode::deterministic && cfg.mode != RunMode::verify &&
      cfg.data != DataKind::rayleigh_benard) {
    throw ConfigError(std::string("mode ") + mode_name(cfg.mode) + " requires Rayleigh-Benard data");
  }
  write_metadata(cfg.out_dir, cfg);
  switch (cfg.mode) {
    case RunMode::deterministic: return mode_deterministic(cfg);
    case RunMode::verify: return mode_verify(cfg);
    case RunMode::sc: return mode_sc(cfg);
    case RunMode::mc: return mode_mc(cfg);
    case RunMode::convergence: return mode_convergence(cfg);
  }
  return kExitConfig;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Finite-volume Navier-Stokes-Fourier solver with collocation and Monte Carlo drivers",
               "nsf-uq"};
  std::string mode;
  std::string config_path;
  int threads = 0;
  std::string out_dir;
  app.add_option("mode", mode, "deterministic | sc | mc | convergence | verify")->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--threads", threads, "worker threads (overrides NSF_UQ_THREADS and the config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    RunConfig cfg = load_config(config_path);
    cfg.mode = parse_mode(mode);
    if (threads > 0) {
      cfg.threads = threads;
    } else if (const char* env = std::getenv("NSF_UQ_THREADS")) {
      try {
        cfg.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw ConfigError(std::string("NSF_UQ_THREADS is not an integer: ") + env);
      }
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
    omp_set_num_threads(cfg.threads);
    return dispatch(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataValidationError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StepFailure& e) {
    std::cerr << "step failure at t = " << e.time() << ": " << e.what() << '\n';
    return kExitStep;
  } catch (const PositivityFailure& e) {
    std::cerr << "positivity failure at t = " << e.time() << ": " << e.what() << '\n';
    return kExitPositivity;
  } catch (const PositivityViolation& e) {
    std::cerr << "positivity failure: " << e.what() << '\n';
    return kExitPositivity;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace nsf
