#include <algorithm>
#include <cmath>

#include "geoflow/solvation/solvation.hpp"

namespace geoflow::solvation {
namespace {

double ion_pressure(const SolvationParams& p, double phi) {
  double s = 0.0;
  for (const auto& ion : p.ions) {
    const double arg = std::clamp(-ion.charge * phi, -p.boltzmann_clamp, p.boltzmann_clamp);
    s += ion.concentration * (std::exp(arg) - 1.0);
  }
  return s;
}

}  // namespace

ScalarField3D nodal_grad_sq(const ScalarField3D& f) {
  const Grid3D& g = f.grid();
  ScalarField3D out(g);
  const bool periodic = g.boundary == core::Boundary::periodic;
  for (int axis = 0; axis < 3; ++axis) {
    const double inv = 0.5 / (g.spacing[axis] * g.spacing[axis]);
    const int n = g.dims[axis];
    for (int k = 0; k < g.dims[2]; ++k)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i) {
          core::Index3 id{i, j, k};
          const int m = id[axis];
          const double c = f.at(i, j, k);
          double s = 0.0;
          for (int step : {-1, 1}) {
            core::Index3 nb = id;
            nb[axis] = m + step;
            if (nb[axis] < 0 || nb[axis] >= n) {
              if (!periodic) continue;
              nb[axis] = (nb[axis] + n) % n;
            }
            const double d = f.at(nb[0], nb[1], nb[2]) - c;
            s += d * d;
          }
          out.at(i, j, k) += inv * s;
        }
  }
  return out;
}

double boundary_flux(const ScalarField3D& phi, const ScalarField3D& eps) {
  const Grid3D& g = phi.grid();
  auto outer = [&](int i, int j, int k) {
    return i == 0 || j == 0 || k == 0 || i == g.dims[0] - 1 || j == g.dims[1] - 1 || k == g.dims[2] - 1;
  };
  double b = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double inv = 1.0 / (g.spacing[axis] * g.spacing[axis]);
    for (int k = 0; k < g.dims[2]; ++k)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i) {
          core::Index3 nb{i, j, k};
          if (++nb[axis] >= g.dims[axis]) continue;
          const bool oa = outer(i, j, k), ob = outer(nb[0], nb[1], nb[2]);
          if (!oa && !ob) continue;
          const double pa = phi.at(i, j, k), pb = phi.at(nb[0], nb[1], nb[2]);
          const double t = 0.5 * (eps.at(i, j, k) + eps.at(nb[0], nb[1], nb[2])) * (pa - pb) * inv;
          if (oa) b += pa * t;
          if (ob) b -= pb * t;
        }
  }
  return b * g.cell_volume();
}

EnergyBreakdown total_energy(const ScalarField3D& S, const ScalarField3D& phi, const ScalarField3D& rho,
                             const SolvationParams& p, const ScalarField3D& U_att) {
  core::require_same_grid(S.grid(), phi.grid(), "total_energy: phi");
  core::require_same_grid(S.grid(), rho.grid(), "total_energy: rho");
  core::require_same_grid(S.grid(), U_att.grid(), "total_energy: U_att");
  const double lambda = p.lambda();
  const double vol = S.grid().cell_volume();
  const ScalarField3D eps = dielectric_of_S(S, p.eps_m, p.eps_s);
  const ScalarField3D g2 = nodal_grad_sq(phi);
  const auto grad = core::grad3d(S);

  EnergyBreakdown e;
  double area = 0.0, volume = 0.0, disp = 0.0, elec = 0.0, ion = 0.0;
  for (std::size_t n = 0; n < S.size(); ++n) {
    const auto gs = grad.at(n);
    area += std::sqrt(gs[0] * gs[0] + gs[1] * gs[1] + gs[2] * gs[2]);
    volume += S[n];
    disp += (1.0 - S[n]) * U_att[n];
    elec += S[n] * rho[n] * phi[n] - eps[n] * g2[n] / (2.0 * lambda);
    ion += (1.0 - S[n]) * ion_pressure(p, phi[n]);
  }
  e.surface = p.gamma * area * vol;
  e.pressure = p.pressure * volume * vol;
  e.dispersion = p.rho0 * disp * vol;
  e.electrostatic = p.kT * (elec * vol + boundary_flux(phi, eps) / (2.0 * lambda));
  e.ion = -p.kT * ion * vol;
  e.total = e.surface + e.pressure + e.dispersion + e.electrostatic + e.ion;
  return e;
}

ScalarField3D potential_V(const ScalarField3D& phi, const ScalarField3D& S, const ScalarField3D& rho,
                          const SolvationParams& p, const ScalarField3D& U_att) {
  core::require_same_grid(S.grid(), phi.grid(), "potential_V: phi");
  core::require_same_grid(S.grid(), rho.grid(), "potential_V: rho");
  core::require_same_grid(S.grid(), U_att.grid(), "potential_V: U_att");
  const double lambda = p.lambda();
  const ScalarField3D g2 = nodal_grad_sq(phi);
  ScalarField3D V(S.grid());
  for (std::size_t n = 0; n < S.size(); ++n) {
    V[n] = -p.pressure + p.rho0 * U_att[n] - p.kT * rho[n] * phi[n] +
           p.kT * (p.eps_m - p.eps_s) * g2[n] / (2.0 * lambda) - p.kT * ion_pressure(p, phi[n]);
  }
  return V;
}

}  // namespace geoflow::solvation
