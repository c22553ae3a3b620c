// Acceptance report: one PASS/FAIL line per criterion. Exits 1 on any failure unless
// --report is given. --only 3,5 restricts the run to the listed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "geoflow/cli/cli.hpp"
#include "geoflow/core/mesh.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/io/off.hpp"
#include "geoflow/io/rng.hpp"
#include "geoflow/localization/localization.hpp"
#include "geoflow/patterns/patterns.hpp"
#include "geoflow/solvation/solvation.hpp"

using namespace geoflow;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = GEOFLOW_CONFIG_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const cli::CheckResult& selftest_check(const std::string& name) {
  static const std::vector<cli::CheckResult> all = cli::run_selftest();
  for (const auto& c : all)
    if (c.name == name) return c;
  static const cli::CheckResult missing{"missing", false, "no such check"};
  return missing;
}

// ---- 1 ----

Outcome torus_curvature() {
  const double outer = localization::analytic_torus_mean_curvature(2.0, 1.1, 0.0);
  const double inner = localization::analytic_torus_mean_curvature(2.0, 1.1, std::numbers::pi);
  const bool exact = std::abs(outer - 0.61584) <= 5e-6 && std::abs(inner + 0.10101) <= 5e-6;
  const auto t0 = std::chrono::steady_clock::now();
  const cli::CheckResult& grid = selftest_check("torus mean curvature");
  const double secs = seconds_since(t0);
  return {exact && grid.pass && secs <= 60.0, "analytic " + fmt(outer, 6) + " / " + fmt(inner, 6) + "; " +
                                                  grid.detail + " (" + fmt(secs, 3) + " s)"};
}

// ---- 2 ----

Outcome localization_rings() {
  struct Case {
    const char* file;
    bool outer;
  };
  bool ok = true;
  std::string detail;
  for (const Case c : {Case{"torus.cfg", true}, Case{"torus_inner.cfg", false}}) {
    const io::RunConfig cfg = io::load_config(kConfigs + "/" + c.file);
    const auto opt = localization::localization_options_from_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = localization::run_localization(opt);
    const double secs = seconds_since(t0);
    const auto& first = r.trace.front();
    const auto& last = r.trace.back();
    const double drift = std::abs(last.total_mass - first.total_mass) / first.total_mass;
    const double frac = c.outer ? last.outer_fraction : last.inner_fraction;
    ok = ok && frac >= 0.7 && drift <= 1e-3 && secs <= 1200.0;
    detail += std::string(detail.empty() ? "" : "; ") + (c.outer ? "outer " : "inner ") + fmt(frac) + " (drift " +
              fmt(drift, 2) + ", " + fmt(secs, 3) + " s)";
  }
  return {ok, detail};
}

// ---- 3 and 4 ----

struct SimRun {
  patterns::PatternRun run;
  core::SurfaceMesh mesh;
  double seconds;
};

SimRun simulate(const std::string& file, std::uint64_t seed) {
  io::RunConfig cfg = io::load_config(kConfigs + "/" + file);
  cfg.set("seed", std::to_string(seed));
  const auto p = patterns::pattern_params_from_config(cfg);
  const auto opt = patterns::pattern_options_from_config(cfg);
  core::SurfaceMesh mesh = io::load_mesh(cfg.str("pattern.mesh"));
  const auto t0 = std::chrono::steady_clock::now();
  patterns::PatternRun run = patterns::run_pattern_simulation(mesh, p, opt);
  return {std::move(run), std::move(mesh), seconds_since(t0)};
}

// Equivalent radii sqrt(A / pi) of the edge-connected components of {phi > 0}.
std::vector<double> component_radii(const core::SurfaceMesh& m, const std::vector<double>& phi) {
  std::vector<int> parent(m.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const auto& t : m.triangles())
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (phi[a] > 0.0 && phi[b] > 0.0) parent[find(a)] = find(b);
    }
  std::vector<double> area(m.vertex_count(), 0.0);
  for (std::size_t v = 0; v < phi.size(); ++v)
    if (phi[v] > 0.0) area[find(static_cast<int>(v))] += m.vertex_areas()[v];
  std::vector<double> radii;
  for (double a : area)
    if (a > 0.0) radii.push_back(std::sqrt(a / std::numbers::pi));
  return radii;
}

std::vector<SimRun> sim1_runs;

Outcome microdomain_radii() {
  struct Sim {
    const char* file;
    double lo, hi;
  };
  bool ok = true;
  double total = 0.0;
  std::string detail;
  for (const Sim s : {Sim{"sim1.cfg", 0.16, 0.30}, Sim{"sim2.cfg", 0.29, 0.45}}) {
    int passed = 0;
    std::string radii;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      SimRun r = simulate(s.file, seed);
      total += r.seconds;
      const double mr = r.run.report.mean_radius;
      passed += (mr >= s.lo && mr <= s.hi) ? 1 : 0;
      const auto comp = component_radii(r.mesh, r.run.phi);
      const double cm = comp.empty() ? 0.0 : std::accumulate(comp.begin(), comp.end(), 0.0) / comp.size();
      radii += std::string(radii.empty() ? "" : ", ") + fmt(mr, 3) + " (k=" +
               std::to_string(r.run.report.clusters.size()) + ", " + std::to_string(comp.size()) +
               " components of mean radius " + fmt(cm, 3) + ")";
      if (std::string(s.file) == "sim1.cfg") sim1_runs.push_back(std::move(r));
    }
    ok = ok && passed >= 2;
    detail += std::string(detail.empty() ? "" : "; ") + s.file + " band [" + fmt(s.lo) + ", " + fmt(s.hi) +
              "]: " + std::to_string(passed) + "/3 with mean radius " + radii;
  }
  ok = ok && total <= 1800.0;
  return {ok, detail + "; " + fmt(total, 4) + " s"};
}

bool dissipates_and_conserves(const SimRun& r, double& worst_rise, double& worst_mass) {
  const auto& E = r.run.accepted_energy;
  const auto& A = r.run.accepted_mass;
  bool ok = !E.empty() && E.size() == A.size();
  for (std::size_t i = 1; i < E.size(); ++i) {
    const double rise = (E[i] - E[i - 1]) / std::max(std::abs(E[i - 1]), 1e-300);
    worst_rise = std::max(worst_rise, rise);
    ok = ok && E[i] <= E[i - 1] + 1e-8 * std::abs(E[i - 1]);
  }
  const double S = r.mesh.total_area();
  for (double a : A) {
    worst_mass = std::max(worst_mass, std::abs(a - A.front()) / S);
    ok = ok && std::abs(a - A.front()) <= 1e-6 * S;
  }
  return ok;
}

Outcome dissipation() {
  if (sim1_runs.empty()) sim1_runs.push_back(simulate("sim1.cfg", 1));
  const SimRun gl = simulate("gl.cfg", 1);
  double rise_g = -1.0, mass_g = 0.0, rise_l = -1.0, mass_l = 0.0;
  bool ok = true;
  for (const auto& r : sim1_runs) ok = dissipates_and_conserves(r, rise_g, mass_g) && ok;
  ok = dissipates_and_conserves(gl, rise_l, mass_l) && ok;
  return {ok, "geodesic (" + std::to_string(sim1_runs.size()) + " runs): max relative energy change " +
                  fmt(rise_g, 3) + ", max mass drift/|S| " + fmt(mass_g, 3) + "; Ginzburg-Landau: " + fmt(rise_l, 3) +
                  ", " + fmt(mass_l, 3) + " over " + std::to_string(gl.run.accepted_steps) + " steps"};
}

// ---- 5 ----

Outcome born_ion() {
  solvation::SolvationParams p;
  p.eps_m = 1.0;
  p.eps_s = 78.0;
  p.gamma = p.rho0 = 0.0;
  const solvation::Atom ion{{0.0, 0.0, 0.0}, 1.0, 2.0, 0.0, 1.0};
  const std::span<const solvation::Atom> atoms(&ion, 1);
  const double exact = solvation::born_energy(1.0, 2.0, p.eps_m, p.eps_s, p.coulomb);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> err;
  std::string detail;
  for (double h : {0.5, 0.25}) {
    solvation::RunOptions o;
    o.h = h;
    o.padding = 8.0;
    const core::Grid3D g = solvation::solute_grid(atoms, h, o.padding);
    const auto S = solvation::dielectric_sphere_surface(g, ion.position, 2.0, h, p.eps_m, p.eps_s);
    const double E = solvation::polar_solvation_energy(atoms, S, p, o);
    err.push_back(std::abs(E - exact) / std::abs(exact));
    detail += "h = " + fmt(h, 2) + ": " + fmt(E, 6) + " (" + fmt(100.0 * err.back(), 3) + "%); ";
  }
  const double secs = seconds_since(t0);
  return {err[1] <= 0.05 && err[1] < err[0] && secs <= 300.0,
          detail + "exact " + fmt(exact, 6) + " kcal/mol, " + fmt(secs, 3) + " s"};
}

// ---- 6 ----

Outcome variational_consistency() {
  const core::SurfaceMesh m = core::make_icosphere(2);
  patterns::PatternParams pp;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    io::Rng rng(seed);
    std::vector<double> phi(m.vertex_count()), dir(m.vertex_count());
    for (double& v : phi) v = rng.uniform(-1.0, 1.0);
    for (double& v : dir) v = rng.uniform(-1.0, 1.0);
    const auto var = patterns::geodesic_variation(m, phi, pp).variation;
    double analytic = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) analytic += m.vertex_areas()[i] * var[i] * dir[i];
    const double h = 1e-5;
    std::vector<double> a = phi, b = phi;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      a[i] += h * dir[i];
      b[i] -= h * dir[i];
    }
    const double fd = (patterns::geodesic_energy(m, a, pp) - patterns::geodesic_energy(m, b, pp)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
  }

  solvation::SolvationParams p;
  p.gamma = 0.0;
  p.pressure = 0.01;
  p.ions = solvation::ions_from_salt(0.2, 1);
  const std::vector<solvation::Atom> atoms{{{-1.0, 0.0, 0.0}, 0.5, 1.0, 0.1, 3.0}, {{1.0, 0.0, 0.0}, -0.5, 1.0, 0.1, 3.0}};
  const core::Grid3D g = solvation::solute_grid(atoms, 0.5, 5.0);
  const auto S = solvation::initial_surface(atoms, g);
  const auto rho = solvation::spread_charges(atoms, g);
  const auto U = solvation::build_vdw_attractive(atoms, g);
  const auto bc = solvation::boundary_potential(atoms, g, p, p.eps_s, p.kappa(), solvation::FarField::coulomb);
  const auto phi = solvation::solve_gpbe(S, rho, p, bc, {}).phi;
  const auto V = solvation::potential_V(phi, S, rho, p, U);
  io::Rng rng(9);
  double worst_v = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    core::ScalarField3D dir(g);
    for (int k = 2; k < g.dims[2] - 2; ++k)
      for (int j = 2; j < g.dims[1] - 2; ++j)
        for (int i = 2; i < g.dims[0] - 2; ++i) {
          const double s = S.at(i, j, k);
          dir.at(i, j, k) = s > 1e-3 && s < 1.0 - 1e-3 ? rng.uniform(-1.0, 1.0) : 0.0;
        }
    const double h = 1e-4;
    core::ScalarField3D a = S, b = S;
    for (std::size_t n = 0; n < S.size(); ++n) {
      a[n] += h * dir[n];
      b[n] -= h * dir[n];
    }
    const double fd =
        (solvation::total_energy(a, phi, rho, p, U).total - solvation::total_energy(b, phi, rho, p, U).total) /
        (2.0 * h);
    double analytic = 0.0;
    for (std::size_t n = 0; n < S.size(); ++n) analytic -= V[n] * dir[n];
    analytic *= g.cell_volume();
    worst_v = std::max(worst_v, std::abs(fd - analytic) / std::abs(analytic));
  }
  return {worst <= 1e-4 && worst_v <= 1e-4,
          "geodesic variation max relative error " + fmt(worst, 3) + " over 10 fields; V " + fmt(worst_v, 3)};
}

// ---- 7 ----

Outcome geometric_oracles() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"icosphere area", "Laplace-Beltrami l=1", "geodesic curvature"}) {
    const auto& c = selftest_check(name);
    ok = ok && c.pass;
    detail += std::string(detail.empty() ? "" : "; ") + c.detail;
  }
  return {ok, detail};
}

// ---- 8 ----

std::string run_to_csv(std::vector<std::string> args, const fs::path& csv) {
  args.insert(args.begin(), "geoflow");
  args.push_back("--trace");
  args.push_back(csv.string());
  args.push_back("--quiet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  if (cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err) != 0) return "error: " + err.str();
  std::ifstream in(csv, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("geoflow_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> rafts{"rafts", "--config", kConfigs + "/sim2.cfg", "--set", "pattern.t_end=1",
                                       "--seed", "3"};
  const std::vector<std::string> loc{"localize", "--config", kConfigs + "/torus.cfg", "--set", "grid.n=64",
                                     "--set", "time.t_end=0.2", "--seed", "3"};
  const std::string r1 = run_to_csv(rafts, dir / "r1.csv"), r2 = run_to_csv(rafts, dir / "r2.csv");
  const std::string l1 = run_to_csv(loc, dir / "l1.csv"), l2 = run_to_csv(loc, dir / "l2.csv");
  fs::remove_all(dir);
  const bool ok = r1 == r2 && l1 == l2 && r1.rfind("error", 0) != 0 && l1.rfind("error", 0) != 0;
  return {ok, "rafts trace " + std::to_string(r1.size()) + " bytes " + (r1 == r2 ? "identical" : "differs") +
                  ", localize trace " + std::to_string(l1.size()) + " bytes " + (l1 == l2 ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  bool report = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--report") {
      report = true;
    } else if (a == "--only" && i + 1 < argc) {
      std::istringstream in(argv[++i]);
      for (std::string tok; std::getline(in, tok, ',');) only.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: geoflow_acceptance [--report] [--only 1,2,...]\n";
      return 2;
    }
  }
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "torus curvature", torus_curvature},
      {2, "protein localization", localization_rings},
      {3, "microdomain radii", microdomain_radii},
      {4, "energy dissipation and mass conservation", dissipation},
      {5, "Born ion", born_ion},
      {6, "variational consistency", variational_consistency},
      {7, "geometric oracles", geometric_oracles},
      {8, "determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
              << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return report || failed == 0 ? 0 : 1;
}
