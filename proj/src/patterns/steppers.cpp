#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "geoflow/core/sparse.hpp"
#include "geoflow/patterns/patterns.hpp"

namespace geoflow::patterns {

StepResult cn_interior_step(const SurfaceMesh& mesh, std::span<const double> phi_n, const PatternParams& p) {
  p.validate();
  core::require_field_on(mesh, phi_n, "cn_interior_step");
  const std::size_t n = phi_n.size();
  const auto A = mesh.vertex_areas();
  const core::CsrMatrix& L = mesh.weak_laplacian();
  const double e = p.epsilon, k = p.k, dt = p.dt, H = p.H_c;
  const double c4 = 0.5 * k * e;

  // Jacobi diagonal of M/dt + c4 L M^-1 L.
  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int q = L.row_ptr[i]; q < L.row_ptr[i + 1]; ++q) s += L.val[q] * L.val[q] / A[L.col[q]];
    inv_diag[i] = 1.0 / (A[i] / dt + c4 * s);
  }
  std::vector<double> t1(n);
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    L.apply(x, t1);
    for (std::size_t i = 0; i < n; ++i) t1[i] /= A[i];
    L.apply(t1, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = A[i] * x[i] / dt + c4 * y[i];
  };

  const GeodesicVariation vn = geodesic_variation(mesh, phi_n, p);
  const SurfaceField lap_n = core::laplace_beltrami_apply(mesh, phi_n);
  const SurfaceField lap2_n = core::laplace_beltrami_apply(mesh, lap_n);

  const double mass_n = core::surface_integral(mesh, phi_n);
  StepResult out{SurfaceField(phi_n.begin(), phi_n.end()), 0, false};
  SurfaceField& psi = out.phi;
  SurfaceField N(n), R(n), b(n), next(n);
  for (int m = 1; m <= p.max_inner; ++m) {
    const GeodesicVariation vm = geodesic_variation(mesh, psi, p);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = psi[i], c = phi_n[i];
      N[i] = (a * a + c * c - 2.0) * (a + c + 2.0 * e * H) / (4.0 * e);
    }
    const SurfaceField lapN = core::laplace_beltrami_apply(mesh, N);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = psi[i], c = phi_n[i];
      const double Q = k / (2.0 * e * e) * (a * a + a * c + c * c + e * H * (a + c) - 1.0) * (vm.W[i] + vn.W[i]);
      R[i] = c4 * lap2_n[i] - k * lapN[i] - Q;
    }
    const double lambda = core::surface_mean(mesh, R);
    for (std::size_t i = 0; i < n; ++i) b[i] = A[i] * (phi_n[i] / dt - R[i] + lambda);
    next = psi;
    const auto pr = core::pcg(apply, inv_diag, b, next, p.pcg_tol, 10000);
    if (!pr.converged) break;
    // The multiplier conserves mass up to the PCG tolerance; remove the remainder.
    const double shift = (mass_n - core::surface_integral(mesh, next)) / mesh.total_area();
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] += shift;
      if (!std::isfinite(next[i])) return out;
      change = std::max(change, std::abs(next[i] - psi[i]));
    }
    psi.swap(next);
    out.inner_iterations = m;
    if (change <= p.eps_psi) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double allen_cahn_stable_dt(const SurfaceMesh& mesh, double sigma) {
  return 2.0 / (sigma * mesh.laplacian_spectral_bound() + 2.0);
}

SurfaceField allen_cahn_step(const SurfaceMesh& mesh, std::span<const double> phi, double sigma, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma_gl must be positive");
  const double limit = allen_cahn_stable_dt(mesh, sigma);
  if (dt > limit) {
    throw std::invalid_argument("dt " + std::to_string(dt) + " exceeds the explicit limit " + std::to_string(limit));
  }
  SurfaceField v = ginzburg_landau_variation(mesh, phi, sigma);
  const double lambda = lagrange_multiplier(mesh, v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi[i] - dt * (v[i] - lambda);
  return v;
}

void clamp_conserving(const SurfaceMesh& mesh, SurfaceField& phi, double target_mass, double bound) {
  core::require_field_on(mesh, phi, "clamp_conserving");
  const auto A = mesh.vertex_areas();
  for (int pass = 0; pass < 8; ++pass) {
    bool clamped = false;
    for (double& v : phi) {
      if (std::abs(v) > bound) {
        v = std::clamp(v, -bound, bound);
        clamped = true;
      }
    }
    if (!clamped) return;
    double free_area = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (std::abs(phi[i]) < bound) free_area += A[i];
    }
    if (free_area == 0.0) return;
    const double shift = (target_mass - core::surface_integral(mesh, phi)) / free_area;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (std::abs(phi[i]) < bound) phi[i] += shift;
    }
  }
}

}  // namespace geoflow::patterns
