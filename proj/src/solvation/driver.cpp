#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "geoflow/error.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/io/pqr.hpp"
#include "geoflow/solvation/solvation.hpp"

namespace geoflow::solvation {
namespace {

ScalarField3D with_boundary(const ScalarField3D& interior, const ScalarField3D& bc) {
  const Grid3D& g = bc.grid();
  ScalarField3D out = interior;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        if (i == 0 || j == 0 || k == 0 || i == g.dims[0] - 1 || j == g.dims[1] - 1 || k == g.dims[2] - 1) {
          out.at(i, j, k) = bc.at(i, j, k);
        }
      }
  return out;
}

ScalarField3D solve_or_throw(const ScalarField3D& S, const ScalarField3D& rho, const SolvationParams& p,
                             const ScalarField3D& guess, const ScalarField3D& bc, const GpbeOptions& opt) {
  GpbeResult r = solve_gpbe(S, rho, p, with_boundary(guess, bc), opt);
  if (!r.converged) {
    throw NumericalError("GPBE did not converge: relative residual " + std::to_string(r.residual_history.back()) +
                         " after " + std::to_string(r.iterations) + " iterations");
  }
  return std::move(r.phi);
}

// Nodes inside some atom's radius; the flow keeps S = 1 there.
std::vector<std::size_t> solute_core(std::span<const Atom> atoms, const Grid3D& g) {
  std::vector<std::size_t> core;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const Vec3 x = g.position(i, j, k);
        for (const auto& a : atoms) {
          const double dx = x[0] - a.position[0], dy = x[1] - a.position[1], dz = x[2] - a.position[2];
          if (dx * dx + dy * dy + dz * dz < a.radius * a.radius) {
            core.push_back(g.index(i, j, k));
            break;
          }
        }
      }
  return core;
}

SolvationParams vacuum_params(const SolvationParams& p) {
  SolvationParams v = p;
  v.eps_m = v.eps_s = 1.0;
  v.ions.clear();
  v.gamma = v.pressure = v.rho0 = 0.0;
  return v;
}

}  // namespace

double vacuum_energy(std::span<const Atom> atoms, const ScalarField3D& S, const ScalarField3D& rho,
                     const SolvationParams& p, const RunOptions& opt) {
  const SolvationParams v = vacuum_params(p);
  const ScalarField3D bc = boundary_potential(atoms, S.grid(), v, 1.0, 0.0, opt.far);
  const ScalarField3D phi = solve_or_throw(S, rho, v, bc, bc, opt.gpbe);
  const ScalarField3D zero(S.grid());
  return total_energy(S, phi, rho, v, zero).total;
}

double polar_solvation_energy(std::span<const Atom> atoms, const ScalarField3D& S, const SolvationParams& p,
                              const RunOptions& opt) {
  p.validate();
  const ScalarField3D rho = spread_charges(atoms, S.grid());
  const ScalarField3D bc = boundary_potential(atoms, S.grid(), p, p.eps_s, p.kappa(), opt.far);
  const ScalarField3D phi = solve_or_throw(S, rho, p, bc, bc, opt.gpbe);
  const ScalarField3D zero(S.grid());
  const EnergyBreakdown e = total_energy(S, phi, rho, p, zero);
  return e.electrostatic + e.ion - vacuum_energy(atoms, S, rho, p, opt);
}

SolvationResult run_solvation(std::span<const Atom> atoms, const SolvationParams& p, const RunOptions& opt) {
  if (atoms.empty()) throw std::invalid_argument("no atoms");
  p.validate();
  if (!(p.gamma > 0.0)) throw std::invalid_argument("the surface flow needs gamma > 0");
  const Grid3D grid = solute_grid(atoms, opt.h, opt.padding);
  const double stable = lb_stable_dt(grid, p.gamma);
  if (opt.dt > stable) {
    throw std::invalid_argument("solver.dt exceeds the stability bound h^2/(6 gamma) = " + std::to_string(stable));
  }
  const double eta = opt.eta_scale / opt.h;

  SolvationResult res{{initial_surface(atoms, grid), ScalarField3D(grid), {}},
                      {},
                      spread_charges(atoms, grid),
                      build_vdw_attractive(atoms, grid),
                      false,
                      0};
  auto& st = res.state;
  const std::vector<std::size_t> core = solute_core(atoms, grid);
  std::vector<char> pinned(grid.size(), 0);
  for (std::size_t n : core) {
    st.S[n] = 1.0;
    pinned[n] = 1;
  }
  const ScalarField3D bc = boundary_potential(atoms, grid, p, p.eps_s, p.kappa(), opt.far);
  st.phi = solve_or_throw(st.S, res.rho, p, bc, bc, opt.gpbe);
  st.energy = total_energy(st.S, st.phi, res.rho, p, res.U_att);
  auto area_of = [&](const EnergyBreakdown& e) { return e.surface / p.gamma; };
  res.trace.push_back({0, 0.0, st.energy, area_of(st.energy)});

  double scale = 1.0;
  for (int cycle = 1; cycle <= opt.max_cycles; ++cycle) {
    ScalarField3D V = potential_V(st.phi, st.S, res.rho, p, res.U_att);
    const double dt = (opt.dt > 0.0 ? opt.dt : 0.9 * stable) * scale;
    {
      // Cap |V| so the potential term moves S by at most 0.1 per step; the sign is kept,
      // so the capped flow still descends.
      const ScalarField3D norm = core::regularized_grad_norm(st.S, eta);
      double nmax = 0.0;
      for (std::size_t n = 0; n < V.size(); ++n) {
        if (!pinned[n]) nmax = std::max(nmax, norm[n]);
      }
      if (nmax > 0.0) {
        const double cap = 0.1 / (dt * nmax);
        for (std::size_t n = 0; n < V.size(); ++n) V[n] = std::clamp(V[n], -cap, cap);
      }
    }
    ScalarField3D S = st.S;
    for (int s = 0; s < opt.flow_steps; ++s) {
      S = lb_flow_step(S, V, p.gamma, dt, eta);
      for (std::size_t n : core) S[n] = 1.0;
    }
    ScalarField3D phi = solve_or_throw(S, res.rho, p, st.phi, bc, opt.gpbe);
    const EnergyBreakdown e = total_energy(S, phi, res.rho, p, res.U_att);
    if (e.total > st.energy.total + 1e-8 * std::abs(st.energy.total)) {
      ++res.rejected_cycles;
      scale *= 0.5;
      if (scale < 1e-6) {
        res.converged = true;  // no descent left at any usable step
        break;
      }
      continue;
    }
    const double change = std::abs(e.total - st.energy.total);
    st.S = std::move(S);
    st.phi = std::move(phi);
    st.energy = e;
    res.trace.push_back({cycle, dt, e, area_of(e)});
    if (change <= opt.tol_G) {
      res.converged = true;
      break;
    }
  }
  st.energy.vacuum = vacuum_energy(atoms, st.S, res.rho, p, opt);
  st.energy.delta = st.energy.total - st.energy.vacuum;
  return res;
}

SolvationParams params_from_config(const io::RunConfig& cfg) {
  SolvationParams p;
  p.eps_m = cfg.real("physics.eps_m");
  p.eps_s = cfg.real("physics.eps_s");
  p.gamma = cfg.real("physics.gamma");
  p.pressure = cfg.real("physics.pressure");
  p.rho0 = cfg.real("physics.rho0");
  p.kT = cfg.real("physics.kT");
  p.coulomb = cfg.real("physics.coulomb");
  p.boltzmann_clamp = cfg.real("physics.boltzmann_clamp");
  p.ions = ions_from_salt(cfg.real("physics.salt_molar"), static_cast<int>(cfg.integer("physics.salt_valence")));
  if (p.eps_s < p.eps_m) throw ConfigError("physics.eps_s must be >= physics.eps_m");
  return p;
}

RunOptions options_from_config(const io::RunConfig& cfg) {
  RunOptions o;
  o.h = cfg.real("grid.spacing");
  o.padding = cfg.real("grid.padding");
  o.far = cfg.str("physics.boundary") == "zero" ? FarField::zero : FarField::coulomb;
  o.gpbe.tol = cfg.real("solver.gpbe_tol");
  o.gpbe.max_iter = static_cast<int>(cfg.integer("solver.gpbe_max_iter"));
  o.gpbe.pcg_tol = cfg.real("solver.pcg_tol");
  o.gpbe.pcg_max_iter = static_cast<int>(cfg.integer("solver.pcg_max_iter"));
  o.flow_steps = static_cast<int>(cfg.integer("solver.flow_steps"));
  o.tol_G = cfg.real("solver.tol_G");
  o.max_cycles = static_cast<int>(cfg.integer("solver.max_cycles"));
  o.dt = cfg.real("solver.dt");
  o.eta_scale = cfg.real("solver.eta_scale");
  return o;
}

std::vector<Atom> atoms_from_config(const io::RunConfig& cfg, const std::string& base_dir) {
  std::filesystem::path path = cfg.str("solute.pqr");
  if (path.empty()) throw ConfigError("missing required key 'solute.pqr'");
  if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
  std::vector<Atom> atoms;
  for (const auto& rec : io::load_pqr(path.string())) {
    const io::LjParams lj = cfg.lj_for(rec.name);
    atoms.push_back({rec.position, rec.charge, rec.radius, lj.eps, lj.sigma});
  }
  return atoms;
}

}  // namespace geoflow::solvation
