#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "geoflow/localization/localization.hpp"

namespace geoflow::localization {

double torus_signed_distance(double R, double r, const Vec3& x) {
  const double rho = std::hypot(x[0], x[1]);
  return r - std::hypot(R - rho, x[2]);
}

double torus_tube_angle(double R, const Vec3& x) {
  return std::atan2(x[2], std::hypot(x[0], x[1]) - R);
}

MembranePhaseField torus_phase_field(double R, double r, const Grid3D& grid, double epsilon, Profile profile) {
  if (!(r > 0.0 && R > r)) throw std::invalid_argument("torus needs R > r > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (grid.boundary != core::Boundary::periodic) throw std::invalid_argument("torus phase field needs a periodic grid");
  const double margin = 5.0 * epsilon;
  const double reach[3] = {R + r, R + r, r};
  for (int a = 0; a < 3; ++a) {
    const double lo = grid.origin[a], hi = grid.origin[a] + grid.period(a);
    if (-reach[a] - margin < lo || reach[a] + margin > hi) {
      throw std::invalid_argument("torus does not fit in the grid with a 5 epsilon margin");
    }
  }
  const double s = 1.0 / (std::sqrt(2.0) * epsilon);
  MembranePhaseField m{ScalarField3D::sample(grid,
                                             [&](const Vec3& x) {
                                               const double d = torus_signed_distance(R, r, x);
                                               return profile == Profile::tanh ? std::tanh(d * s) : d;
                                             }),
                       epsilon, profile};
  return m;
}

double analytic_torus_mean_curvature(double R, double r, double theta) {
  if (!(r > 0.0 && R > r)) throw std::invalid_argument("torus needs R > r > 0");
  const double c = std::cos(theta);
  return (R + 2.0 * r * c) / (2.0 * r * (R + r * c));
}

ScalarField3D mean_curvature_phase_field(const ScalarField3D& phi, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  ScalarField3D H = core::laplacian3d(phi);
  const double inv_e2 = 1.0 / (epsilon * epsilon);
  // phi = +1 inside, so the profile formula yields -H for outward normals; flip it.
  const double pre = -std::sqrt(2.0) * epsilon / 2.0;
  for (std::size_t n = 0; n < H.size(); ++n) {
    const double f = phi[n];
    if (std::abs(f) > 0.9) {
      H[n] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double s = 1.0 - f * f;
    H[n] = pre * (H[n] + inv_e2 * f * s) / std::max(s, 0.01);
  }
  return H;
}

double delta_band(double phi) {
  const double f = std::clamp(phi, -1.0, 1.0);
  return f <= 0.0 ? std::tanh(10.0 * (f + 1.0)) : -std::tanh(10.0 * (f - 1.0));
}

ScalarField3D delta_band(const ScalarField3D& phi) {
  ScalarField3D d(phi.grid());
  for (std::size_t n = 0; n < d.size(); ++n) d[n] = delta_band(phi[n]);
  return d;
}

}  // namespace geoflow::localization
