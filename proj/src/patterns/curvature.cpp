#include <algorithm>
#include <cmath>
#include <limits>

#include "geoflow/patterns/patterns.hpp"

namespace geoflow::patterns {

SurfaceField phase_to_geodesic_curvature(const SurfaceMesh& mesh, std::span<const double> phi, double epsilon) {
  const SurfaceField lap = core::laplace_beltrami_apply(mesh, phi);
  SurfaceField H(phi.size(), std::numeric_limits<double>::quiet_NaN());
  const double inv_e2 = 1.0 / (epsilon * epsilon);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double f = phi[i];
    if (std::abs(f) > 0.9) continue;
    const double s = 1.0 - f * f;
    H[i] = std::sqrt(2.0) * epsilon * (lap[i] + inv_e2 * s * f) / std::max(s, 0.01);
  }
  return H;
}

}  // namespace geoflow::patterns
