#include "nsf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "nsf/errors.hpp"

namespace nsf {

using nlohmann::json;

RunMode parse_mode(const std::string& name) {
  if (name == "deterministic") return RunMode::deterministic;
  if (name == "sc") return RunMode::sc;
  if (name == "mc") return RunMode::mc;
  if (name == "convergence") return RunMode::convergence;
  if (name == "verify") return RunMode::verify;
  throw ConfigError("unknown mode '" + name + "' (deterministic, sc, mc, convergence, verify)");
}

const char* mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::deterministic: return "deterministic";
    case RunMode::sc: return "sc";
    case RunMode::mc: return "mc";
    case RunMode::convergence: return "convergence";
    case RunMode::verify: return "verify";
  }
  return "?";
}

void RunConfig::validate() const {
  (void)build_mesh(nx, ny, x1_extent);
  if (!(final_time > 0.0) || !std::isfinite(final_time)) throw ConfigError("final_time must be positive");
  scheme.validate();
  rb.validate();
  if (data == DataKind::equilibrium && (!(equilibrium_rho > 0.0) || !(equilibrium_theta > 0.0))) {
    throw ConfigError("data: equilibrium rho and theta must be positive");
  }
  if (sc_points < 1) throw ConfigError("sc.n must be at least 1");
  if (!(param_lo <= param_hi) || param_lo < -0.1 || param_hi > 0.1) {
    throw ConfigError("sc: need -0.1 <= lo <= hi <= 0.1");
  }
  if (mc_members < 1 || mc_groups < 1) throw ConfigError("mc: M and K must be at least 1");
  if (ladder != "sc" && ladder != "mc") throw ConfigError("convergence.ladder must be 'sc' or 'mc'");
  if (mode == RunMode::convergence) {
    if (ladder == "sc") {
      if (sc_ladder.levels < 3) throw ConfigError("convergence: the collocation ladder needs at least 3 levels");
      if (sc_ladder.ny0 < 2 || sc_ladder.n0 < 1 || sc_ladder.n_ref < 1) {
        throw ConfigError("convergence: invalid collocation ladder");
      }
      const int finest = sc_ladder.ny0 << (sc_ladder.levels - 1);
      if (sc_ladder.ny_ref % finest != 0) {
        throw ConfigError("convergence: reference mesh must refine the finest ladder mesh");
      }
      (void)build_mesh(static_cast<int>(std::lround(x1_extent * sc_ladder.ny_ref / 2.0)), sc_ladder.ny_ref,
                       x1_extent);
    } else {
      if (mc_ladder.members.size() < 3) throw ConfigError("convergence: the Monte Carlo ladder needs at least 3 levels");
      for (int m : mc_ladder.members) {
        if (m < 1) throw ConfigError("convergence: M values must be at least 1");
      }
      if (mc_ladder.groups < 1 || mc_ladder.reference_members < 1) {
        throw ConfigError("convergence: invalid Monte Carlo ladder");
      }
    }
  }
  if (snapshot_every < 0) throw ConfigError("output.snapshot_every must be >= 0");
  for (double y : line_ordinates) {
    if (!(y > -1.0 && y < 1.0)) throw ConfigError("output.line_ordinates must lie in (-1, 1)");
  }
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

Vec2 read_vec2(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(where + ": expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

RunConfig from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, "config",
                 {"mode", "mesh", "final_time", "scheme", "fluid", "rb", "data", "sc", "mc", "convergence",
                  "output", "threads", "version"});
  if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    reject_unknown(m, "mesh", {"nx", "ny", "x1_extent"});
    read(m, "nx", c.nx);
    read(m, "ny", c.ny);
    read(m, "x1_extent", c.x1_extent);
  }
  read(j, "final_time", c.final_time);
  if (j.contains("scheme")) {
    const json& s = j.at("scheme");
    reject_unknown(s, "scheme",
                   {"alpha", "c_dt", "newton_tol", "newton_max_iter", "linear_tol", "max_halvings",
                    "direct_solver_limit"});
    read(s, "alpha", c.scheme.alpha);
    read(s, "c_dt", c.scheme.c_dt);
    read(s, "newton_tol", c.scheme.newton_tol);
    read(s, "newton_max_iter", c.scheme.newton_max_iter);
    read(s, "linear_tol", c.scheme.linear_tol);
    read(s, "max_halvings", c.scheme.max_halvings);
    read(s, "direct_solver_limit", c.scheme.direct_solver_limit);
  }
  FluidParams fluid = c.rb.fluid;
  if (j.contains("fluid")) {
    const json& f = j.at("fluid");
    reject_unknown(f, "fluid", {"mu", "lambda", "kappa", "gamma", "g"});
    read(f, "mu", fluid.mu);
    read(f, "lambda", fluid.lambda);
    read(f, "kappa", fluid.kappa);
    read(f, "gamma", fluid.gamma);
    if (f.contains("g")) fluid.g = read_vec2(f.at("g"), "fluid.g");
  }
  if (j.contains("rb")) {
    const json& r = j.at("rb");
    reject_unknown(r, "rb", {"a", "b", "c", "rho_mean", "perturbation_seed", "aj", "bj"});
    std::uint64_t seed = c.rb.perturbation_seed;
    read(r, "perturbation_seed", seed);
    c.rb = RBConfig::with_seed(seed);
    read(r, "a", c.rb.a);
    read(r, "b", c.rb.b);
    read(r, "c", c.rb.c);
    read(r, "rho_mean", c.rb.rho_mean);
    if (r.contains("aj") != r.contains("bj")) throw ConfigError("rb: give both aj and bj or neither");
    if (r.contains("aj")) {
      const auto aj = r.at("aj").get<std::vector<double>>();
      const auto bj = r.at("bj").get<std::vector<double>>();
      if (aj.size() != c.rb.aj.size() || bj.size() != c.rb.bj.size()) {
        throw ConfigError("rb: aj and bj need 10 entries each");
      }
      std::copy(aj.begin(), aj.end(), c.rb.aj.begin());
      std::copy(bj.begin(), bj.end(), c.rb.bj.begin());
    }
  }
  c.rb.fluid = fluid;
  if (j.contains("data")) {
    const json& d = j.at("data");
    reject_unknown(d, "data", {"kind", "rho", "theta"});
    if (d.contains("kind")) {
      const auto kind = d.at("kind").get<std::string>();
      if (kind == "rayleigh_benard") {
        c.data = DataKind::rayleigh_benard;
      } else if (kind == "equilibrium") {
        c.data = DataKind::equilibrium;
      } else {
        throw ConfigError("data.kind must be 'rayleigh_benard' or 'equilibrium'");
      }
    }
    read(d, "rho", c.equilibrium_rho);
    read(d, "theta", c.equilibrium_theta);
  }
  if (j.contains("sc")) {
    const json& s = j.at("sc");
    reject_unknown(s, "sc", {"n", "lo", "hi"});
    read(s, "n", c.sc_points);
    read(s, "lo", c.param_lo);
    read(s, "hi", c.param_hi);
  }
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    reject_unknown(m, "mc", {"M", "K", "seed"});
    read(m, "M", c.mc_members);
    read(m, "K", c.mc_groups);
    read(m, "seed", c.mc_seed);
  }
  if (j.contains("convergence")) {
    const json& v = j.at("convergence");
    reject_unknown(v, "convergence", {"ladder", "sc", "mc", "lambda_thresholds"});
    read(v, "ladder", c.ladder);
    if (v.contains("sc")) {
      const json& s = v.at("sc");
      reject_unknown(s, "convergence.sc", {"ny0", "n0", "levels", "ny_ref", "n_ref"});
      read(s, "ny0", c.sc_ladder.ny0);
      read(s, "n0", c.sc_ladder.n0);
      read(s, "levels", c.sc_ladder.levels);
      read(s, "ny_ref", c.sc_ladder.ny_ref);
      read(s, "n_ref", c.sc_ladder.n_ref);
    }
    if (v.contains("mc")) {
      const json& m = v.at("mc");
      reject_unknown(m, "convergence.mc", {"members", "groups", "seed", "reference_members", "reference_seed"});
      read(m, "members", c.mc_ladder.members);
      read(m, "groups", c.mc_ladder.groups);
      read(m, "seed", c.mc_ladder.seed);
      read(m, "reference_members", c.mc_ladder.reference_members);
      read(m, "reference_seed", c.mc_ladder.reference_seed);
    }
    read(v, "lambda_thresholds", c.lambda_thresholds);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, "output", {"dir", "snapshot_every", "line_ordinates"});
    if (o.contains("dir")) c.out_dir = o.at("dir").get<std::string>();
    read(o, "snapshot_every", c.snapshot_every);
    read(o, "line_ordinates", c.line_ordinates);
  }
  read(j, "threads", c.threads);
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["mode"] = mode_name(c.mode);
  j["mesh"] = {{"nx", c.nx}, {"ny", c.ny}, {"x1_extent", c.x1_extent}};
  j["final_time"] = c.final_time;
  j["scheme"] = {{"alpha", c.scheme.alpha},
                 {"c_dt", c.scheme.c_dt},
                 {"newton_tol", c.scheme.newton_tol},
                 {"newton_max_iter", c.scheme.newton_max_iter},
                 {"linear_tol", c.scheme.linear_tol},
                 {"max_halvings", c.scheme.max_halvings},
                 {"direct_solver_limit", c.scheme.direct_solver_limit}};
  const FluidParams& f = c.rb.fluid;
  j["fluid"] = {{"mu", f.mu}, {"lambda", f.lambda}, {"kappa", f.kappa}, {"gamma", f.gamma},
                {"g", {f.g.x(), f.g.y()}}};
  j["rb"] = {{"a", c.rb.a},
             {"b", c.rb.b},
             {"c", c.rb.c},
             {"rho_mean", c.rb.rho_mean},
             {"perturbation_seed", c.rb.perturbation_seed},
             {"aj", std::vector<double>(c.rb.aj.begin(), c.rb.aj.end())},
             {"bj", std::vector<double>(c.rb.bj.begin(), c.rb.bj.end())}};
  j["data"] = {{"kind", c.data == DataKind::equilibrium ? "equilibrium" : "rayleigh_benard"},
               {"rho", c.equilibrium_rho},
               {"theta", c.equilibrium_theta}};
  j["sc"] = {{"n", c.sc_points}, {"lo", c.param_lo}, {"hi", c.param_hi}};
  j["mc"] = {{"M", c.mc_members}, {"K", c.mc_groups}, {"seed", c.mc_seed}};
  j["convergence"] = {
      {"ladder", c.ladder},
      {"sc",
       {{"ny0", c.sc_ladder.ny0},
        {"n0", c.sc_ladder.n0},
        {"levels", c.sc_ladder.levels},
        {"ny_ref", c.sc_ladder.ny_ref},
        {"n_ref", c.sc_ladder.n_ref}}},
      {"mc",
       {{"members", c.mc_ladder.members},
        {"groups", c.mc_ladder.groups},
        {"seed", c.mc_ladder.seed},
        {"reference_members", c.mc_ladder.reference_members},
        {"reference_seed", c.mc_ladder.reference_seed}}},
      {"lambda_thresholds", c.lambda_thresholds}};
  j["output"] = {{"dir", c.out_dir.string()},
                 {"snapshot_every", c.snapshot_every},
                 {"line_ordinates", c.line_ordinates}};
  j["threads"] = c.threads;
  return j.dump(2);
}

}  // namespace nsf
