#include "doctest.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nsf/cli.hpp"
#include "nsf/config.hpp"
#include "nsf/errors.hpp"
#include "nsf/io.hpp"

using namespace nsf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nsf_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"nsf-uq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

const char* kTinyRb = R"({"mesh": {"nx": 8, "ny": 4}, "final_time": 0.2, "output": {"snapshot_every": 2}})";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults and round trip") {
  const RunConfig c = parse_config("{}");
  CHECK_NOTHROW(c.validate());
  CHECK(c.nx == 64);
  CHECK(c.ny == 32);
  CHECK(c.line_ordinates == std::vector<double>{-0.75, 0.75});
  CHECK(c.scheme.c_dt == 0.1);
  const std::string text = config_to_json(c);
  const RunConfig back = parse_config(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.rb.aj == c.rb.aj);
  CHECK(back.rb.bj == c.rb.bj);
}

TEST_CASE("explicit values survive the round trip") {
  const RunConfig c = parse_config(R"({"mode": "mc", "mesh": {"nx": 16, "ny": 8, "x1_extent": 4},
      "scheme": {"alpha": 0.25, "c_dt": 0.05}, "mc": {"M": 7, "K": 3, "seed": 99},
      "rb": {"perturbation_seed": 5}, "threads": 2})");
  CHECK(c.mode == RunMode::mc);
  CHECK(c.scheme.alpha == 0.25);
  CHECK(c.mc_members == 7);
  CHECK(c.mc_seed == 99u);
  CHECK(c.rb.aj == RBConfig::with_seed(5).aj);
  CHECK(config_to_json(parse_config(config_to_json(c))) == config_to_json(c));
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"mesh": {"nx": "eight"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_mode("explore"), ConfigError);
  RunConfig c = parse_config(R"({"mode": "convergence", "convergence": {"sc": {"levels": 1}}})");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = parse_config(R"({"mesh": {"nx": 8, "ny": 4, "x1_extent": 3}})");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = parse_config(R"({"output": {"line_ordinates": [1.5]}})");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

}

TEST_SUITE("io") {

TEST_CASE("convergence CSV parses back into the same rates") {
  TempDir tmp;
  std::vector<ConvergenceRow> rows;
  for (int l = 0; l < 3; ++l) {
    ConvergenceRow r;
    r.h = 0.125 / (1 << l);
    r.count = 2 << l;
    for (std::size_t q = 0; q < kNumQuantities; ++q) r.errors[q] = {0.3 * r.h * (1 + 0.1 * q * l), 0.1 * std::sqrt(r.h)};
    rows.push_back(r);
  }
  const ConvergenceTable t = convergence_table(rows, "h");
  write_convergence_csv(tmp.path / "c.csv", t);
  const ConvergenceTable back = read_convergence_csv(tmp.path / "c.csv", "h");
  CHECK(back.rate_e1 == t.rate_e1);
  CHECK(back.rate_e2 == t.rate_e2);
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[2].count == 8);
}

TEST_CASE("VTK layout and line profiles") {
  TempDir tmp;
  const Mesh m = build_mesh(4, 2, 4.0);
  NamedField a{"a", 1, {}};
  NamedField v{"v", 2, {}};
  for (int k = 0; k < m.num_cells(); ++k) {
    a.values.push_back(m.barycenter(k).y());
    v.values.push_back(k);
    v.values.push_back(-k);
  }
  write_vtk(tmp.path / "f.vtk", m, {a, v});
  const std::string text = read_file(tmp.path / "f.vtk");
  CHECK(text.find("DATASET STRUCTURED_POINTS\nDIMENSIONS 5 3 1\n") != std::string::npos);
  CHECK(text.find("CELL_DATA 8\n") != std::string::npos);
  CHECK(text.find("SCALARS a double 1\n") != std::string::npos);
  CHECK(text.find("VECTORS v double\n") != std::string::npos);

  const auto prof = line_profile(m, a, 0.2);  // a = x2, linear between row centres
  for (double x : prof) CHECK(x == doctest::Approx(0.2));
  CHECK(line_profile(m, a, 0.9)[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(write_vtk(tmp.path / "g.vtk", m, {NamedField{"bad", 1, {1.0}}}), ConfigError);
}

}

TEST_SUITE("cli") {

TEST_CASE("missing config is a config error") {
  CHECK(cli({"verify"}) == kExitConfig);
  CHECK(cli({}) == kExitConfig);
  CHECK(cli({"verify", "--config", "/nonexistent.json"}) == kExitConfig);
}

TEST_CASE("verify on equilibrium data passes") {
  TempDir tmp;
  write_file(tmp.path / "eq.json", R"({"mesh": {"nx": 8, "ny": 4}, "final_time": 0.2, "data": {"kind": "equilibrium"}})");
  CHECK(cli({"verify", "--config", (tmp.path / "eq.json").string(), "--out", (tmp.path / "o").string()}) == kExitOk);
}

TEST_CASE("verify fails with a tolerance that cannot be met") {
  TempDir tmp;
  // newton_tol = 1e-30 puts the closure bound below round-off; Newton stops
  // at its floor and the closure check reports the miss.
  write_file(tmp.path / "rb.json", R"({"mesh": {"nx": 8, "ny": 4}, "final_time": 0.1, "scheme": {"newton_tol": 1e-30}})");
  CHECK(cli({"verify", "--config", (tmp.path / "rb.json").string(), "--out", (tmp.path / "o").string()}) ==
        kExitVerify);
}

TEST_CASE("one ladder level is rejected") {
  TempDir tmp;
  write_file(tmp.path / "c.json", R"({"convergence": {"sc": {"levels": 1}}})");
  CHECK(cli({"convergence", "--config", (tmp.path / "c.json").string(), "--out", (tmp.path / "o").string()}) ==
        kExitConfig);
}

TEST_CASE("deterministic run writes CSV, snapshots and replayable metadata") {
  TempDir tmp;
  write_file(tmp.path / "rb.json", kTinyRb);
  const fs::path a = tmp.path / "a";
  const fs::path b = tmp.path / "b";
  REQUIRE(cli({"deterministic", "--config", (tmp.path / "rb.json").string(), "--out", a.string()}) == kExitOk);
  CHECK(fs::exists(a / "diagnostics.csv"));
  CHECK(fs::exists(a / "metadata.json"));
  CHECK(fs::exists(a / "lines.csv"));
  CHECK(fs::exists(a / "final.vtk"));
  int snapshots = 0;
  for (const auto& e : fs::directory_iterator(a)) snapshots += e.path().filename().string().rfind("snapshot_", 0) == 0;
  CHECK(snapshots == 3);  // t = 0 and every second of the 4 steps

  REQUIRE(cli({"deterministic", "--config", (a / "metadata.json").string(), "--out", b.string()}) == kExitOk);
  CHECK(read_file(a / "diagnostics.csv") == read_file(b / "diagnostics.csv"));
  CHECK(read_file(a / "final.vtk") == read_file(b / "final.vtk"));
}

TEST_CASE("thread override from the environment") {
  TempDir tmp;
  write_file(tmp.path / "rb.json", kTinyRb);
  ::setenv("NSF_UQ_THREADS", "lots", 1);
  CHECK(cli({"deterministic", "--config", (tmp.path / "rb.json").string(), "--out", (tmp.path / "o").string()}) ==
        kExitConfig);
  // The command line wins over the environment.
  CHECK(cli({"deterministic", "--config", (tmp.path / "rb.json").string(), "--out", (tmp.path / "o").string(),
             "--threads", "2"}) == kExitOk);
  ::unsetenv("NSF_UQ_THREADS");
}

TEST_CASE("unwritable output directory") {
  TempDir tmp;
  write_file(tmp.path / "rb.json", kTinyRb);
  write_file(tmp.path / "plain", "x");
  CHECK(cli({"deterministic", "--config", (tmp.path / "rb.json").string(), "--out", (tmp.path / "plain" / "sub").string()}) ==
        kExitIo);
}

TEST_CASE("step failure exit code") {
  TempDir tmp;
  write_file(tmp.path / "rb.json", R"({"mesh": {"nx": 8, "ny": 4}, "final_time": 0.1, "scheme": {"newton_max_iter": 1}})");
  CHECK(cli({"deterministic", "--config", (tmp.path / "rb.json").string(), "--out", (tmp.path / "o").string()}) ==
        kExitStep);
}

}
