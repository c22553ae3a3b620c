#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "geoflow/localization/localization.hpp"

namespace geoflow::localization {
namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Trilinear interpolation on a periodic grid; NaN if any corner is NaN.
double interpolate(const ScalarField3D& f, const Vec3& x) {
  const Grid3D& g = f.grid();
  int base[3];
  double w[3];
  for (int a = 0; a < 3; ++a) {
    const double s = (x[a] - g.origin[a]) / g.spacing[a];
    const double fl = std::floor(s);
    base[a] = static_cast<int>(fl);
    w[a] = s - fl;
  }
  double v = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
    const double wt = (di ? w[0] : 1.0 - w[0]) * (dj ? w[1] : 1.0 - w[1]) * (dk ? w[2] : 1.0 - w[2]);
    v += wt * f.at(wrap(base[0] + di, g.dims[0]), wrap(base[1] + dj, g.dims[1]), wrap(base[2] + dk, g.dims[2]));
  }
  return v;
}

}  // namespace

void SpeciesParams::validate() const {
  if (a_pro < 0.0) throw std::invalid_argument("a_pro must be non-negative");
  if (!(D > 0.0)) throw std::invalid_argument("D must be positive");
  if (!(kT > 0.0)) throw std::invalid_argument("kT must be positive");
  for (const auto& l : lipids) {
    if (l.a < 0.0 || l.density < 0.0) throw std::invalid_argument("lipid sizes and densities must be non-negative");
  }
}

ScalarField3D spontaneous_curvature_field(const SpeciesParams& s, const ScalarField3D& rho) {
  s.validate();
  double lip_cover = 0.0, lip_curv = 0.0;
  for (const auto& l : s.lipids) {
    lip_cover += l.a * l.a * l.density;
    lip_curv += l.C0 * l.a * l.a * l.density;
  }
  const double a2 = s.a_pro * s.a_pro;
  ScalarField3D H0(rho.grid());
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double cover = lip_cover + a2 * rho[n];
    if (std::abs(cover - 1.0) > 1e-6) {
      throw std::invalid_argument("saturation violated: coverage " + std::to_string(cover) + " at node " +
                                  std::to_string(n));
    }
    H0[n] = std::sqrt(2.0) * (lip_curv + s.C0_pro * a2 * rho[n]);
  }
  return H0;
}

ScalarField3D band_potential(const ScalarField3D& phi, double epsilon, const ScalarField3D& H0) {
  core::require_same_grid(phi.grid(), H0.grid(), "band_potential: H0");
  ScalarField3D P = mean_curvature_phase_field(phi, epsilon);
  for (std::size_t n = 0; n < P.size(); ++n) P[n] -= H0[n];
  return P;
}

ScalarField3D drift_potential_P(const MembranePhaseField& m, const ScalarField3D& H0) {
  const Grid3D& g = m.phi.grid();
  if (g.boundary != core::Boundary::periodic) throw std::invalid_argument("drift_potential_P needs a periodic grid");
  const ScalarField3D band = band_potential(m.phi, m.epsilon, H0);
  const double s = std::sqrt(2.0) * m.epsilon;
  const double lim = 1.0 - 1e-12;

  // Distance recovered from the profile; the inversion is exact wherever phi is not
  // saturated in double precision.
  ScalarField3D dist(g);
  std::vector<char> invertible(g.size(), 1);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double f = m.phi[n];
    if (m.profile == Profile::tanh) {
      invertible[n] = std::abs(f) < lim;
      dist[n] = s * std::atanh(std::clamp(f, -lim, lim));
    } else {
      dist[n] = f;
    }
  }
  const VectorField3D grad = core::grad3d(dist);

  // Nodes take the band value at their closest surface point x - d grad d / |grad d|.
  ScalarField3D P(g, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> known(g.size(), 0);
  std::size_t count = 0;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const std::size_t n = g.index(i, j, k);
        if (!invertible[n]) continue;
        const Vec3 gr = grad.at(n);
        const double gn = std::sqrt(gr[0] * gr[0] + gr[1] * gr[1] + gr[2] * gr[2]);
        double v = band[n];
        if (gn > 0.0) {
          const double d = dist[n];
          const Vec3 x = g.position(i, j, k);
          const Vec3 cp{x[0] - d * gr[0] / gn, x[1] - d * gr[1] / gn, x[2] - d * gr[2] / gn};
          const double vc = interpolate(band, cp);
          if (!std::isnan(vc)) v = vc;
        }
        if (std::isnan(v)) continue;
        P[n] = v;
        known[n] = 1;
        ++count;
      }
  if (count == 0) throw std::invalid_argument("phase field has no band nodes");

  // Layered neighbour averaging for the rest.
  std::vector<std::size_t> layer;
  std::vector<double> value;
  while (count < g.size()) {
    layer.clear();
    value.clear();
    for (int k = 0; k < g.dims[2]; ++k)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i) {
          const std::size_t n = g.index(i, j, k);
          if (known[n]) continue;
          double sum = 0.0;
          int c = 0;
          const std::size_t nb[6] = {g.index(wrap(i - 1, g.dims[0]), j, k), g.index(wrap(i + 1, g.dims[0]), j, k),
                                     g.index(i, wrap(j - 1, g.dims[1]), k), g.index(i, wrap(j + 1, g.dims[1]), k),
                                     g.index(i, j, wrap(k - 1, g.dims[2])), g.index(i, j, wrap(k + 1, g.dims[2]))};
          for (std::size_t q : nb) {
            if (known[q]) {
              sum += P[q];
              ++c;
            }
          }
          if (c > 0) {
            layer.push_back(n);
            value.push_back(sum / c);
          }
        }
    for (std::size_t q = 0; q < layer.size(); ++q) {
      P[layer[q]] = value[q];
      known[layer[q]] = 1;
    }
    count += layer.size();
  }
  return P;
}

ScalarField3D chemical_potential(const ScalarField3D& rho, const SpeciesParams& s, const ScalarField3D& P) {
  s.validate();
  core::require_same_grid(rho.grid(), P.grid(), "chemical_potential: P");
  double lip_cover = 0.0;
  const double a_lip = s.lipids.empty() ? 1.0 : s.lipids.front().a;
  for (const auto& l : s.lipids) lip_cover += l.a * l.a * l.density;
  const double a2 = s.a_pro * s.a_pro;
  const double size_ratio = a_lip > 0.0 ? a2 / (a_lip * a_lip) : 0.0;
  ScalarField3D mu(rho.grid());
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double r = std::max(rho[n], 1e-12);
    const double arg = 1.0 - r * a2 - lip_cover;
    if (!(arg > 0.0 && arg <= 1.0)) {
      throw std::invalid_argument("saturation argument " + std::to_string(arg) + " outside (0, 1] at node " +
                                  std::to_string(n));
    }
    const double L = a2 > 0.0 ? std::log(r * a2) : std::log(r);
    const double Rterm = -size_ratio * std::log(arg);
    mu[n] = s.kT * (L + Rterm) - 2.0 * s.C0_pro * a2 * P[n];
  }
  return mu;
}

}  // namespace geoflow::localization
