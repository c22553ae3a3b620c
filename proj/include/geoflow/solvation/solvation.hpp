#pragma once

#include <span>
#include <string>
#include <vector>

#include "geoflow/core/grid.hpp"

namespace geoflow::io {
class RunConfig;
}

namespace geoflow::solvation {

using core::Grid3D;
using core::ScalarField3D;
using core::Vec3;

struct Atom {
  Vec3 position{};
  double charge = 0.0;   // e
  double radius = 1.0;   // Angstrom
  double lj_eps = 0.0;   // kcal/mol
  double lj_sigma = 1.0; // Angstrom
};

struct IonSpecies {
  double charge = 0.0;         // e
  double concentration = 0.0;  // Angstrom^-3
};

/// Symmetric z:z electrolyte at the given molarity.
std::vector<IonSpecies> ions_from_salt(double molar, int valence);

struct SolvationParams {
  double eps_m = 1.0;
  double eps_s = 80.0;
  double gamma = 0.0065;    // kcal/(mol A^2)
  double pressure = 0.0;    // kcal/(mol A^3)
  double rho0 = 0.0334;     // A^-3
  double kT = 0.5925;       // kcal/mol
  double coulomb = 332.0636;  // kcal A / (mol e^2)
  std::vector<IonSpecies> ions;
  double boltzmann_clamp = 50.0;

  /// 4 pi C / kT: the source scale of the potential equation in kT/e units.
  double lambda() const;
  /// Debye-Hueckel screening constant in the solvent.
  double kappa() const;
  /// Throws std::invalid_argument on eps_s < eps_m, non-positive constants, or an
  /// electrolyte that is not neutral.
  void validate() const;
};

struct EnergyBreakdown {
  double surface = 0.0;
  double pressure = 0.0;
  double dispersion = 0.0;
  double electrostatic = 0.0;
  double ion = 0.0;
  double total = 0.0;
  double vacuum = 0.0;
  double delta = 0.0;
};

struct SolvationState {
  ScalarField3D S;
  ScalarField3D phi;  // kT/e
  EnergyBreakdown energy;
};

// ---- sources and coefficients ----

/// Trilinear spreading onto the 8 enclosing nodes, as a density (e / A^3).
/// Throws std::invalid_argument for atoms closer than 2h to the grid boundary.
ScalarField3D spread_charges(std::span<const Atom> atoms, const Grid3D& grid);

/// WCA attractive tail of a 12-6 Lennard-Jones pair, truncated to 0 beyond 10 sigma.
double wca_attractive(double r, double eps, double sigma);

ScalarField3D build_vdw_attractive(std::span<const Atom> atoms, const Grid3D& grid);

/// (1 - S) eps_s + S eps_m. Throws std::invalid_argument for S outside [0, 1].
ScalarField3D dielectric_of_S(const ScalarField3D& S, double eps_m, double eps_s);

/// max_j 0.5 (1 + tanh((R_j + probe - |r - r_j|) / (2h))).
ScalarField3D initial_surface(std::span<const Atom> atoms, const Grid3D& grid, double probe = 1.4);

/// Dirichlet grid enclosing every atom's radius plus `padding`, spacing h.
Grid3D solute_grid(std::span<const Atom> atoms, double h, double padding);

// ---- electrostatics ----

enum class FarField { zero, coulomb };

/// Potential (kT/e) of the point charges in a uniform dielectric eps with screening
/// kappa; used as Dirichlet data on the outer grid nodes. Zero when `far` is zero.
ScalarField3D boundary_potential(std::span<const Atom> atoms, const Grid3D& grid, const SolvationParams& p,
                                 double eps, double kappa, FarField far);

struct GpbeOptions {
  double tol = 1e-6;
  int max_iter = 60;
  double pcg_tol = 1e-9;
  int pcg_max_iter = 20000;
};

struct GpbeResult {
  ScalarField3D phi;
  std::vector<double> residual_history;  // relative residual per accepted iterate
  int iterations = 0;
  int pcg_iterations = 0;
  bool converged = false;
};

/// Solves -div(eps(S) grad phi) = lambda [S rho + (1 - S) sum_i c_i q_i exp(-q_i phi)] on
/// the interior nodes, with phi held at `phi_init`'s values on the outer nodes. Newton
/// linearisation of the Boltzmann term, Jacobi-PCG inner solves and backtracking so
/// the residual never increases. Exponents are clamped to +-boltzmann_clamp.
GpbeResult solve_gpbe(const ScalarField3D& S, const ScalarField3D& rho, const SolvationParams& p,
                      const ScalarField3D& phi_init, const GpbeOptions& opt = {});

// ---- energy, potential, flow ----

/// Face-averaged squared gradient: sum over axes of the mean of the squared forward
/// and backward differences (one-sided at the outer nodes).
ScalarField3D nodal_grad_sq(const ScalarField3D& f);

/// h^3 sum over outer nodes of phi_b (A phi)_b, the flux the truncated domain leaves
/// out of the field energy. Zero when phi vanishes on the boundary.
double boundary_flux(const ScalarField3D& phi, const ScalarField3D& eps);

/// All terms of the total free energy for the given (S, phi). `vacuum` and `delta` are
/// left for the caller. The electrostatic term includes the boundary flux closure,
/// so at a solution it equals (kT/2) int S rho phi.
EnergyBreakdown total_energy(const ScalarField3D& S, const ScalarField3D& phi, const ScalarField3D& rho,
                             const SolvationParams& p, const ScalarField3D& U_att);

/// V = -p + rho0 U - kT rho phi + kT (eps_m - eps_s) |grad phi|^2 / (2 lambda)
///     - kT sum_i c_i (exp(-q_i phi) - 1), the negative S-variation of every term but
/// the surface tension.
ScalarField3D potential_V(const ScalarField3D& phi, const ScalarField3D& S, const ScalarField3D& rho,
                          const SolvationParams& p, const ScalarField3D& U_att);

/// Largest stable explicit step h^2 / (6 gamma).
double lb_stable_dt(const Grid3D& grid, double gamma);

/// S' = clamp(S + dt |grad S|_eta [gamma div(grad S / |grad S|_eta) + V], 0, 1) on the
/// interior nodes; the outer nodes keep their values. Throws std::invalid_argument
/// when dt exceeds lb_stable_dt or gamma <= 0.
ScalarField3D lb_flow_step(const ScalarField3D& S, const ScalarField3D& V, double gamma, double dt, double eta);

// ---- coupled run ----

struct RunOptions {
  double h = 0.5;
  double padding = 8.0;
  FarField far = FarField::coulomb;
  GpbeOptions gpbe;
  int flow_steps = 50;
  double tol_G = 1e-4;
  int max_cycles = 200;
  double dt = 0.0;          // 0 selects 0.9 h^2 / (6 gamma)
  double eta_scale = 1e-6;  // eta = eta_scale / h
};

struct CycleRecord {
  int cycle = 0;
  double dt = 0.0;
  EnergyBreakdown energy;
  double area = 0.0;
};

struct SolvationResult {
  SolvationState state;
  std::vector<CycleRecord> trace;  // accepted cycles, starting with the initial surface
  ScalarField3D rho;
  ScalarField3D U_att;
  bool converged = false;
  int rejected_cycles = 0;
};

/// Vacuum reference on the same grid and spreading: eps = 1, no ions, no nonpolar terms.
double vacuum_energy(std::span<const Atom> atoms, const ScalarField3D& S, const ScalarField3D& rho,
                     const SolvationParams& p, const RunOptions& opt);

/// Alternates GPBE solves and blocks of flow steps from the inflated-vdW start until
/// the accepted-cycle change of G_tot falls below tol_G. S stays pinned to 1 at nodes
/// inside an atom's radius, where the point charges live. A cycle that raises G_tot
/// is rejected and retried with half the step.
SolvationResult run_solvation(std::span<const Atom> atoms, const SolvationParams& p, const RunOptions& opt);

/// Polar solvation energy (kcal/mol) for a prescribed surface function: solvated
/// minus vacuum, both on `S`'s grid.
double polar_solvation_energy(std::span<const Atom> atoms, const ScalarField3D& S, const SolvationParams& p,
                              const RunOptions& opt);

// ---- reference solutions ----

/// -(C q^2 / (2 a)) (1/eps_m - 1/eps_s), kcal/mol.
double born_energy(double charge, double radius, double eps_m, double eps_s, double coulomb = 332.0636);

/// Surface function of a sphere whose inverse dielectric 1/eps(S) follows
/// 1/eps_s + (1/eps_m - 1/eps_s) (1 + tanh((radius - |x - c|) / width)) / 2, so the
/// dielectric boundary sits at the sphere radius.
ScalarField3D dielectric_sphere_surface(const Grid3D& grid, const Vec3& center, double radius, double width,
                                        double eps_m, double eps_s);

SolvationParams params_from_config(const io::RunConfig& cfg);
RunOptions options_from_config(const io::RunConfig& cfg);
/// PQR atoms with Lennard-Jones values from the config table. Relative PQR paths are
/// resolved against `base_dir`.
std::vector<Atom> atoms_from_config(const io::RunConfig& cfg, const std::string& base_dir);

}  // namespace geoflow::solvation
