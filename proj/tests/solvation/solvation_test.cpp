#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geoflow/error.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/io/rng.hpp"
#include "geoflow/solvation/solvation.hpp"

using namespace geoflow;
using namespace geoflow::solvation;

namespace {

std::vector<Atom> diatomic(double q) {
  return {{{-1.0, 0.0, 0.0}, q, 1.0, 0.1, 3.0}, {{1.0, 0.0, 0.0}, -q, 1.0, 0.1, 3.0}};
}

}  // namespace

TEST_SUITE("solvation") {

TEST_CASE("unit constants") {
  SolvationParams p;
  CHECK(p.lambda() == doctest::Approx(4.0 * std::numbers::pi * 332.0636 / 0.5925));
  p.ions = ions_from_salt(0.1, 1);
  REQUIRE(p.ions.size() == 2);
  CHECK(p.ions[0].concentration == doctest::Approx(0.1 * 6.02214076e-4));
  // Debye length of 0.1 M 1:1 salt in water near 298 K is about 9.7 Angstrom (eps = 80).
  CHECK(1.0 / p.kappa() == doctest::Approx(9.70).epsilon(0.01));
  CHECK(ions_from_salt(0.0, 1).empty());
  CHECK(born_energy(1.0, 2.0, 1.0, 78.0) == doctest::Approx(-81.9516).epsilon(1e-5));
}

TEST_CASE("parameter validation") {
  SolvationParams p;
  CHECK_NOTHROW(p.validate());
  p.eps_s = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SolvationParams{};
  p.ions = {{1.0, 1e-4}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SolvationParams{};
  p.gamma = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("charge spreading conserves charge and respects the boundary margin") {
  const auto atoms = diatomic(0.4);
  const Grid3D g = solute_grid(atoms, 0.37, 4.0);
  std::vector<Atom> charged = atoms;
  charged[1].position = {0.93, 0.21, -0.34};
  charged[1].charge = 0.7;
  const ScalarField3D rho = spread_charges(charged, g);
  CHECK(rho.integral() == doctest::Approx(1.1).epsilon(1e-12));
  std::vector<Atom> edge{{g.position(1, 5, 5), 1.0, 1.0, 0.0, 1.0}};
  CHECK_THROWS_AS(spread_charges(edge, g), std::invalid_argument);
}

TEST_CASE("WCA tail and dielectric blend") {
  const double rmin = std::pow(2.0, 1.0 / 6.0) * 3.0;
  CHECK(wca_attractive(1.0, 0.2, 3.0) == -0.2);
  CHECK(wca_attractive(rmin, 0.2, 3.0) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(wca_attractive(31.0, 0.2, 3.0) == 0.0);
  CHECK(wca_attractive(6.0, 0.2, 3.0) == doctest::Approx(4.0 * 0.2 * (std::pow(0.5, 12) - std::pow(0.5, 6))));

  const Grid3D g = Grid3D::cube(0.0, 1.0, 4, core::Boundary::dirichlet_zero);
  ScalarField3D S(g, 0.25);
  const ScalarField3D eps = dielectric_of_S(S, 2.0, 80.0);
  CHECK(eps[0] == doctest::Approx(0.75 * 80.0 + 0.25 * 2.0));
  S[3] = 1.2;
  CHECK_THROWS_AS(dielectric_of_S(S, 2.0, 80.0), std::invalid_argument);
}

TEST_CASE("initial surface is 1 at the atoms and 0 far away") {
  const auto atoms = diatomic(0.0);
  const Grid3D g = solute_grid(atoms, 0.5, 6.0);
  const ScalarField3D S = initial_surface(atoms, g);
  double lo = 1.0, hi = 0.0;
  for (std::size_t n = 0; n < S.size(); ++n) {
    lo = std::min(lo, S[n]);
    hi = std::max(hi, S[n]);
  }
  CHECK(lo >= 0.0);
  CHECK(hi <= 1.0);
  CHECK(S[0] < 1e-6);
  const Grid3D& gg = S.grid();
  const int ci = static_cast<int>(std::lround((-1.0 - gg.origin[0]) / gg.spacing[0]));
  const int cj = static_cast<int>(std::lround(-gg.origin[1] / gg.spacing[1]));
  CHECK(S.at(ci, cj, cj) > 0.99);
}

TEST_CASE("GPBE Newton iteration never increases the residual") {
  SolvationParams p;
  p.ions = ions_from_salt(0.15, 1);
  const auto atoms = diatomic(0.8);
  const Grid3D g = solute_grid(atoms, 0.5, 6.0);
  const ScalarField3D S = initial_surface(atoms, g);
  const ScalarField3D rho = spread_charges(atoms, g);
  const ScalarField3D bc = boundary_potential(atoms, g, p, p.eps_s, p.kappa(), FarField::coulomb);
  const GpbeResult r = solve_gpbe(S, rho, p, bc, {});
  CHECK(r.converged);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i) {
    CHECK(r.residual_history[i] <= r.residual_history[i - 1] * (1.0 + 1e-12));
  }
  CHECK(r.residual_history.back() <= 1e-6);
  // Boundary values are kept.
  CHECK(r.phi[0] == bc[0]);
  CHECK(r.phi[g.size() - 1] == bc[g.size() - 1]);
}

TEST_CASE("at a solution the field energy equals half the charge-potential integral") {
  SolvationParams p;
  const auto atoms = diatomic(0.6);
  const Grid3D g = solute_grid(atoms, 0.5, 6.0);
  const ScalarField3D S = initial_surface(atoms, g);
  const ScalarField3D rho = spread_charges(atoms, g);
  const ScalarField3D bc = boundary_potential(atoms, g, p, p.eps_s, 0.0, FarField::coulomb);
  GpbeOptions tight;
  tight.tol = 1e-10;
  tight.pcg_tol = 1e-12;
  const GpbeResult r = solve_gpbe(S, rho, p, bc, tight);
  REQUIRE(r.converged);
  const EnergyBreakdown e = total_energy(S, r.phi, rho, p, ScalarField3D(g));
  double srp = 0.0;
  for (std::size_t n = 0; n < S.size(); ++n) srp += S[n] * rho[n] * r.phi[n];
  CHECK(e.electrostatic == doctest::Approx(0.5 * p.kT * srp * g.cell_volume()).epsilon(1e-6));
  CHECK(boundary_flux(ScalarField3D(g), dielectric_of_S(S, p.eps_m, p.eps_s)) == 0.0);
}

TEST_CASE("V is minus the S-derivative of the non-surface energy at fixed potential") {
  SolvationParams p;
  p.gamma = 0.0;
  p.pressure = 0.01;
  p.ions = ions_from_salt(0.2, 1);
  const auto atoms = diatomic(0.5);
  const Grid3D g = solute_grid(atoms, 0.5, 5.0);
  const ScalarField3D S = initial_surface(atoms, g);
  const ScalarField3D rho = spread_charges(atoms, g);
  const ScalarField3D U = build_vdw_attractive(atoms, g);
  const ScalarField3D bc = boundary_potential(atoms, g, p, p.eps_s, p.kappa(), FarField::coulomb);
  const ScalarField3D phi = solve_gpbe(S, rho, p, bc, {}).phi;
  const ScalarField3D V = potential_V(phi, S, rho, p, U);
  io::Rng rng(9);
  for (int trial = 0; trial < 3; ++trial) {
    ScalarField3D dir(g);
    for (int k = 2; k < g.dims[2] - 2; ++k)
      for (int j = 2; j < g.dims[1] - 2; ++j)
        for (int i = 2; i < g.dims[0] - 2; ++i) {
          const double s = S.at(i, j, k);
          dir.at(i, j, k) = s > 1e-3 && s < 1.0 - 1e-3 ? rng.uniform(-1.0, 1.0) : 0.0;
        }
    const double h = 1e-4;
    ScalarField3D a = S, b = S;
    for (std::size_t n = 0; n < S.size(); ++n) {
      a[n] += h * dir[n];
      b[n] -= h * dir[n];
    }
    const double fd = (total_energy(a, phi, rho, p, U).total - total_energy(b, phi, rho, p, U).total) / (2.0 * h);
    double analytic = 0.0;
    for (std::size_t n = 0; n < S.size(); ++n) analytic -= V[n] * dir[n];
    analytic *= g.cell_volume();
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
  }
}

TEST_CASE("Laplace-Beltrami flow step") {
  const auto atoms = diatomic(0.0);
  const Grid3D g = solute_grid(atoms, 0.5, 5.0);
  const ScalarField3D S = initial_surface(atoms, g);
  const ScalarField3D V(g);
  const double stable = lb_stable_dt(g, 0.0065);
  CHECK(stable == doctest::Approx(0.25 / (6.0 * 0.0065)));
  CHECK_THROWS_AS(lb_flow_step(S, V, 0.0065, 1.01 * stable, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(lb_flow_step(S, V, 0.0, 0.1, 1e-6), std::invalid_argument);
  // Pure curvature flow shrinks the surface and keeps S in [0, 1].
  SolvationParams p;
  p.rho0 = p.pressure = 0.0;
  const double area0 = total_energy(S, ScalarField3D(g), ScalarField3D(g), p, ScalarField3D(g)).surface;
  ScalarField3D s = S;
  for (int i = 0; i < 20; ++i) s = lb_flow_step(s, V, 0.0065, 0.9 * stable, 1e-6 / 0.5);
  const double area1 = total_energy(s, ScalarField3D(g), ScalarField3D(g), p, ScalarField3D(g)).surface;
  CHECK(area1 < area0);
  for (std::size_t n = 0; n < s.size(); ++n) REQUIRE((s[n] >= 0.0 && s[n] <= 1.0));
  const ScalarField3D flat(g, 0.3);
  const ScalarField3D same = lb_flow_step(flat, V, 0.0065, stable, 1e-6);
  CHECK(same[g.index(3, 3, 3)] == doctest::Approx(0.3));
}

TEST_CASE("coupled run on a neutral diatomic descends and converges") {
  SolvationParams p;
  RunOptions o;
  o.h = 0.5;
  o.padding = 6.0;
  const auto atoms = diatomic(0.0);
  const SolvationResult r = run_solvation(atoms, p, o);
  CHECK(r.converged);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].energy.total <= r.trace[i - 1].energy.total + 1e-8 * std::abs(r.trace[i - 1].energy.total));
  }
  // Pinned core.
  const Grid3D& g = r.state.S.grid();
  const int ci = static_cast<int>(std::lround((-1.0 - g.origin[0]) / g.spacing[0]));
  const int cj = static_cast<int>(std::lround(-g.origin[1] / g.spacing[1]));
  CHECK(r.state.S.at(ci, cj, cj) == 1.0);
  CHECK(r.state.energy.delta == doctest::Approx(r.state.energy.total - r.state.energy.vacuum));
  CHECK_THROWS_AS(run_solvation(std::vector<Atom>{}, p, o), std::invalid_argument);
}

TEST_CASE("config adapters") {
  io::RunConfig c = io::parse_config(
      "model = solvate\n[solute]\npqr = ion.pqr\n[physics]\nsalt_molar = 0.1\neps_s = 78\n[lj]\nNA = 0.05, 2.4\n");
  const SolvationParams p = params_from_config(c);
  CHECK(p.eps_s == 78.0);
  CHECK(p.ions.size() == 2);
  const auto atoms = atoms_from_config(c, GEOFLOW_CONFIG_DIR);
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].charge == 1.0);
  CHECK(atoms[0].radius == 2.0);
  CHECK(atoms[0].lj_eps == 0.05);
  c.set("physics.eps_m", "90");
  CHECK_THROWS_AS(params_from_config(c), ConfigError);
  c.set("solute.pqr", "missing.pqr");
  CHECK_THROWS_AS(atoms_from_config(c, GEOFLOW_CONFIG_DIR), ConfigError);
}

}  // TEST_SUITE
