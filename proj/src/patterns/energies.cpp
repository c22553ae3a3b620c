#include <cmath>
#include <stdexcept>

#include "geoflow/patterns/patterns.hpp"

namespace geoflow::patterns {

void PatternParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(eps_psi > 0.0)) throw std::invalid_argument("eps_psi must be positive");
  if (!(sigma_gl > 0.0)) throw std::invalid_argument("sigma_gl must be positive");
  if (!(pcg_tol > 0.0)) throw std::invalid_argument("pcg_tol must be positive");
  if (max_inner < 1) throw std::invalid_argument("max_inner must be at least 1");
  if (!std::isfinite(H_c)) throw std::invalid_argument("H_c must be finite");
}

double ginzburg_landau_energy(const SurfaceMesh& mesh, std::span<const double> phi, double sigma) {
  core::require_field_on(mesh, phi, "ginzburg_landau_energy");
  const SurfaceField Lphi = core::weak_laplacian_apply(mesh, phi);
  const auto A = mesh.vertex_areas();
  double e = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) e += A[i] * double_well(phi[i]) - 0.5 * sigma * phi[i] * Lphi[i];
  return e;
}

SurfaceField ginzburg_landau_variation(const SurfaceMesh& mesh, std::span<const double> phi, double sigma) {
  core::require_field_on(mesh, phi, "ginzburg_landau_variation");
  SurfaceField v = core::laplace_beltrami_apply(mesh, phi);
  for (std::size_t i = 0; i < phi.size(); ++i) v[i] = double_well_prime(phi[i]) - sigma * v[i];
  return v;
}

double geodesic_energy(const SurfaceMesh& mesh, std::span<const double> phi, const PatternParams& p) {
  core::require_field_on(mesh, phi, "geodesic_energy");
  const SurfaceField lap = core::laplace_beltrami_apply(mesh, phi);
  const auto A = mesh.vertex_areas();
  const double inv_e2 = 1.0 / (p.epsilon * p.epsilon);
  double g = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double E = lap[i] + inv_e2 * (phi[i] + p.H_c * p.epsilon) * (1.0 - phi[i] * phi[i]);
    g += A[i] * E * E;
  }
  return 0.5 * p.k * p.epsilon * g;
}

GeodesicVariation geodesic_variation(const SurfaceMesh& mesh, std::span<const double> phi, const PatternParams& p) {
  core::require_field_on(mesh, phi, "geodesic_variation");
  const std::size_t n = phi.size();
  const double e = p.epsilon, inv_e2 = 1.0 / (e * e);
  const SurfaceField lap = core::laplace_beltrami_apply(mesh, phi);
  GeodesicVariation out{SurfaceField(n), SurfaceField(n), SurfaceField(n), SurfaceField(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double f = phi[i];
    out.W_L[i] = e * lap[i] + f / e + p.H_c;
    out.W_N[i] = -f * f * f / e - p.H_c * f * f;
    out.W[i] = e * lap[i] - (f + p.H_c * e) * (f * f - 1.0) / e;
  }
  const SurfaceField lapW = core::laplace_beltrami_apply(mesh, out.W);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = phi[i];
    out.variation[i] = p.k * (lapW[i] - inv_e2 * (3.0 * f * f + 2.0 * p.H_c * e * f - 1.0) * out.W[i]);
  }
  return out;
}

double lagrange_multiplier(const SurfaceMesh& mesh, std::span<const double> variation) {
  return core::surface_mean(mesh, variation);
}

}  // namespace geoflow::patterns
