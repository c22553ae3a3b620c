#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geoflow/solvation/solvation.hpp"

namespace geoflow::solvation {

namespace {
constexpr double kAvogadroPerLitreA3 = 6.02214076e-4;  // particles per A^3 at 1 mol/L
}

std::vector<IonSpecies> ions_from_salt(double molar, int valence) {
  if (molar < 0.0 || valence < 1) throw std::invalid_argument("salt needs molar >= 0 and valence >= 1");
  if (molar == 0.0) return {};
  const double c = molar * kAvogadroPerLitreA3;
  return {{static_cast<double>(valence), c}, {-static_cast<double>(valence), c}};
}

double SolvationParams::lambda() const { return 4.0 * std::numbers::pi * coulomb / kT; }

double SolvationParams::kappa() const {
  double s = 0.0;
  for (const auto& ion : ions) s += ion.concentration * ion.charge * ion.charge;
  return std::sqrt(lambda() * s / eps_s);
}

void SolvationParams::validate() const {
  if (!(eps_m > 0.0) || !(eps_s >= eps_m)) throw std::invalid_argument("dielectrics need eps_s >= eps_m > 0");
  if (gamma < 0.0 || pressure < 0.0 || rho0 < 0.0) {
    throw std::invalid_argument("gamma, pressure and rho0 must be non-negative");
  }
  if (!(kT > 0.0) || !(coulomb > 0.0) || !(boltzmann_clamp > 0.0)) {
    throw std::invalid_argument("kT, coulomb and boltzmann_clamp must be positive");
  }
  double net = 0.0, scale = 0.0;
  for (const auto& ion : ions) {
    if (ion.concentration < 0.0) throw std::invalid_argument("ion concentration must be non-negative");
    net += ion.charge * ion.concentration;
    scale += std::abs(ion.charge * ion.concentration);
  }
  if (std::abs(net) > 1e-12 * std::max(scale, 1.0)) throw std::invalid_argument("ion species are not electroneutral");
}

ScalarField3D spread_charges(std::span<const Atom> atoms, const Grid3D& grid) {
  ScalarField3D rho(grid);
  const double inv_vol = 1.0 / grid.cell_volume();
  for (const auto& a : atoms) {
    int base[3];
    double frac[3];
    for (int d = 0; d < 3; ++d) {
      const double u = (a.position[d] - grid.origin[d]) / grid.spacing[d];
      if (!(u >= 2.0) || !(u <= grid.dims[d] - 3.0)) {
        throw std::invalid_argument("atom lies within 2h of the grid boundary");
      }
      base[d] = std::min(static_cast<int>(std::floor(u)), grid.dims[d] - 2);
      frac[d] = u - base[d];
    }
    for (int c = 0; c < 8; ++c) {
      const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
      const double w = (di ? frac[0] : 1 - frac[0]) * (dj ? frac[1] : 1 - frac[1]) * (dk ? frac[2] : 1 - frac[2]);
      rho.at(base[0] + di, base[1] + dj, base[2] + dk) += w * a.charge * inv_vol;
    }
  }
  return rho;
}

double wca_attractive(double r, double eps, double sigma) {
  if (r > 10.0 * sigma) return 0.0;
  if (r < std::pow(2.0, 1.0 / 6.0) * sigma) return -eps;
  const double s6 = std::pow(sigma / r, 6);
  return 4.0 * eps * (s6 * s6 - s6);
}

ScalarField3D build_vdw_attractive(std::span<const Atom> atoms, const Grid3D& grid) {
  ScalarField3D U(grid);
  for (int k = 0; k < grid.dims[2]; ++k)
    for (int j = 0; j < grid.dims[1]; ++j)
      for (int i = 0; i < grid.dims[0]; ++i) {
        const Vec3 x = grid.position(i, j, k);
        double u = 0.0;
        for (const auto& a : atoms) {
          const double dx = x[0] - a.position[0], dy = x[1] - a.position[1], dz = x[2] - a.position[2];
          u += wca_attractive(std::sqrt(dx * dx + dy * dy + dz * dz), a.lj_eps, a.lj_sigma);
        }
        U.at(i, j, k) = u;
      }
  return U;
}

ScalarField3D dielectric_of_S(const ScalarField3D& S, double eps_m, double eps_s) {
  ScalarField3D eps(S.grid());
  for (std::size_t n = 0; n < S.size(); ++n) {
    const double s = S[n];
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("surface function outside [0, 1]");
    eps[n] = (1.0 - s) * eps_s + s * eps_m;
  }
  return eps;
}

ScalarField3D initial_surface(std::span<const Atom> atoms, const Grid3D& grid, double probe) {
  const double w = 2.0 * grid.spacing[0];
  ScalarField3D S(grid);
  for (int k = 0; k < grid.dims[2]; ++k)
    for (int j = 0; j < grid.dims[1]; ++j)
      for (int i = 0; i < grid.dims[0]; ++i) {
        const Vec3 x = grid.position(i, j, k);
        double s = 0.0;
        for (const auto& a : atoms) {
          const double dx = x[0] - a.position[0], dy = x[1] - a.position[1], dz = x[2] - a.position[2];
          const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
          s = std::max(s, 0.5 * (1.0 + std::tanh((a.radius + probe - d) / w)));
        }
        S.at(i, j, k) = s;
      }
  return S;
}

Grid3D solute_grid(std::span<const Atom> atoms, double h, double padding) {
  if (atoms.empty()) throw std::invalid_argument("no atoms");
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const auto& a : atoms)
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], a.position[d] - a.radius);
      hi[d] = std::max(hi[d], a.position[d] + a.radius);
    }
  core::Index3 dims{};
  Vec3 origin{};
  for (int d = 0; d < 3; ++d) {
    const double len = hi[d] - lo[d] + 2.0 * padding;
    dims[d] = static_cast<int>(std::ceil(len / h)) + 1;
    // Centre the node lattice on the solute box.
    origin[d] = 0.5 * (lo[d] + hi[d]) - 0.5 * (dims[d] - 1) * h;
  }
  return Grid3D::make(origin, {h, h, h}, dims, core::Boundary::dirichlet_zero);
}

}  // namespace geoflow::solvation
