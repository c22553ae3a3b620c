#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "geoflow/cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::initializer_list<std::string> args) {
  std::vector<std::string> a{"geoflow"};
  a.insert(a.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : a) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = geoflow::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("geoflow_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kConfigs = GEOFLOW_CONFIG_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
  const Run none = cli({});
  CHECK(none.code == 2);
  const Run unknown = cli({"mesh", "--mesh", "builtin:icosphere:1", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("--bogus") != std::string::npos);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("config errors exit with 2") {
  CHECK(cli({"localize", "--config", kConfigs + "/sim1.cfg"}).code == 2);
  CHECK(cli({"rafts", "--set", "pattern.k=-1"}).code == 2);
  CHECK(cli({"rafts", "--set", "nonsense"}).code == 2);
  CHECK(cli({"rafts", "--config", kConfigs + "/missing.cfg"}).code == 2);
  CHECK(cli({"mesh", "--mesh", "builtin:icosphere:9"}).code == 2);
  CHECK(cli({"analyze", "--input", "/nonexistent/file.vtk"}).code == 2);
}

TEST_CASE("mesh summary and outputs") {
  const fs::path dir = scratch("mesh");
  const Run r = cli({"mesh", "--mesh", "builtin:icosphere:2", "--out", (dir / "s.off").string(), "--vtk-out",
                         dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("mesh: 162 vertices, 320 triangles, euler 2") != std::string::npos);
  CHECK(fs::exists(dir / "mesh.vtk"));
  const Run back = cli({"mesh", "--mesh", (dir / "s.off").string(), "--quiet"});
  REQUIRE(back.code == 0);
  CHECK(back.out.find("162 vertices") != std::string::npos);
}

TEST_CASE("rafts trace is byte-identical for a fixed seed and seed-sensitive otherwise") {
  const fs::path dir = scratch("rafts");
  auto run = [&](const std::string& name, const std::string& seed) {
    return cli({"rafts", "--mesh", "builtin:icosphere:2", "--set", "pattern.t_end=0.02", "--set",
                    "pattern.trace_every=2", "--seed", seed, "--trace", (dir / name).string(), "--vtk-out",
                    (dir / name).string() + "_vtk", "--quiet"});
  };
  const Run a = run("a.csv", "5");
  REQUIRE(a.code == 0);
  CHECK(a.out.rfind("rafts: ", 0) == 0);
  REQUIRE(run("b.csv", "5").code == 0);
  REQUIRE(run("c.csv", "6").code == 0);
  const std::string ta = slurp(dir / "a.csv");
  CHECK(ta.rfind("t,energy,mass\n", 0) == 0);
  CHECK(ta == slurp(dir / "b.csv"));
  CHECK(ta != slurp(dir / "c.csv"));

  SUBCASE("analyze reproduces the domain report from the VTK output") {
    const Run an = cli({"analyze", "--input", (dir / "a.csv_vtk" / "rafts.vtk").string(), "--seed", "5",
                            "--quiet"});
    REQUIRE(an.code == 0);
    const std::string rafts = a.out.substr(7, a.out.find(", silhouette") - 7);
    CHECK(an.out.find(rafts) != std::string::npos);
    CHECK(cli({"analyze", "--input", (dir / "a.csv_vtk" / "rafts.vtk").string(), "--field", "nope"}).code == 2);
  }
}

TEST_CASE("GEOFLOW_SEED takes precedence over --seed") {
  const fs::path dir = scratch("seed");
  auto run = [&](const std::string& name, const std::string& seed) {
    return cli({"rafts", "--mesh", "builtin:icosphere:2", "--set", "pattern.t_end=0.01", "--seed", seed,
                    "--trace", (dir / name).string(), "--quiet"});
  };
  REQUIRE(run("plain.csv", "9").code == 0);
  ::setenv("GEOFLOW_SEED", "9", 1);
  const Run env = run("env.csv", "4");
  ::unsetenv("GEOFLOW_SEED");
  REQUIRE(env.code == 0);
  CHECK(slurp(dir / "plain.csv") == slurp(dir / "env.csv"));
  ::setenv("GEOFLOW_SEED", "not-a-number", 1);
  const Run bad = run("bad.csv", "4");
  ::unsetenv("GEOFLOW_SEED");
  CHECK(bad.code == 2);
}

TEST_CASE("short localize run") {
  const fs::path dir = scratch("localize");
  const Run r = cli({"localize", "--config", kConfigs + "/torus.cfg", "--set", "grid.n=64", "--set",
                         "time.t_end=0.02", "--set", "time.sample_every=0.01", "--trace",
                         (dir / "loc.csv").string(), "--vtk-out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("localize: outer fraction") != std::string::npos);
  const std::string csv = slurp(dir / "loc.csv");
  CHECK(csv.rfind("t,total_mass,outer_fraction,inner_fraction,max_rho\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(fs::exists(dir / "localize.vtk"));
}

TEST_CASE("selftest passes") {
  const Run r = cli({"selftest", "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
}

}  // TEST_SUITE
