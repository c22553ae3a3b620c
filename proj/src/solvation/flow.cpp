#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geoflow/solvation/solvation.hpp"

namespace geoflow::solvation {

double lb_stable_dt(const Grid3D& grid, double gamma) {
  const double h = std::min({grid.spacing[0], grid.spacing[1], grid.spacing[2]});
  return h * h / (6.0 * gamma);
}

ScalarField3D lb_flow_step(const ScalarField3D& S, const ScalarField3D& V, double gamma, double dt, double eta) {
  core::require_same_grid(S.grid(), V.grid(), "lb_flow_step: V");
  if (!(gamma > 0.0)) throw std::invalid_argument("lb_flow_step needs gamma > 0");
  if (!(dt > 0.0) || dt > lb_stable_dt(S.grid(), gamma) * (1.0 + 1e-12)) {
    throw std::invalid_argument("lb_flow_step: dt outside (0, h^2/(6 gamma)]");
  }
  if (eta < 0.0) throw std::invalid_argument("lb_flow_step: eta must be non-negative");
  const Grid3D& g = S.grid();
  const bool periodic = g.boundary == core::Boundary::periodic;
  const auto grad = core::grad3d(S);
  const ScalarField3D norm = core::regularized_grad_norm(S, eta);
  const double eta2 = eta * eta;

  // Curvature term in flux form: gamma * sum_axes (F_{+1/2} - F_{-1/2}) / h, with the
  // face normal built from the face difference and the averaged tangential derivatives.
  auto face_flux = [&](int axis, int i, int j, int k, int ni, int nj, int nk) {
    const std::size_t a = g.index(i, j, k), b = g.index(ni, nj, nk);
    const double h = g.spacing[axis];
    double q = 0.0;
    double d[3];
    for (int t = 0; t < 3; ++t) {
      d[t] = t == axis ? (S[b] - S[a]) / h : 0.5 * (grad.component(t)[a] + grad.component(t)[b]);
      q += d[t] * d[t];
    }
    const double nf = std::sqrt(q + eta2);
    return nf > 0.0 ? d[axis] / nf : 0.0;
  };

  ScalarField3D out = S;
  const int lo = periodic ? 0 : 1;
  for (int k = lo; k < g.dims[2] - lo; ++k)
    for (int j = lo; j < g.dims[1] - lo; ++j)
      for (int i = lo; i < g.dims[0] - lo; ++i) {
        double div = 0.0;
        for (int axis = 0; axis < 3; ++axis) {
          core::Index3 p{i, j, k}, m{i, j, k};
          p[axis] = (p[axis] + 1) % g.dims[axis];
          m[axis] = (m[axis] - 1 + g.dims[axis]) % g.dims[axis];
          const double fp = face_flux(axis, i, j, k, p[0], p[1], p[2]);
          const double fm = face_flux(axis, m[0], m[1], m[2], i, j, k);
          div += (fp - fm) / g.spacing[axis];
        }
        const std::size_t n = g.index(i, j, k);
        out[n] = std::clamp(S[n] + dt * norm[n] * (gamma * div + V[n]), 0.0, 1.0);
      }
  return out;
}

}  // namespace geoflow::solvation
