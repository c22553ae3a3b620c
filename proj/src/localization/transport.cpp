#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "geoflow/core/spectral.hpp"
#include "geoflow/localization/localization.hpp"

namespace geoflow::localization {
namespace {

// Nodes with smaller delta carry no transport.
constexpr double kSupport = 1e-3;

// Offset of the +1 neighbour along `axis`, with periodic wrap.
std::size_t neighbour(const Grid3D& g, int i, int j, int k, int axis) {
  core::Index3 id{i, j, k};
  id[axis] = (id[axis] + 1) % g.dims[axis];
  return g.index(id[0], id[1], id[2]);
}

}  // namespace

TransportStepper::TransportStepper(const ScalarField3D& delta, const ScalarField3D& P, const TransportParams& params,
                                   const VectorField3D* v)
    : grid_(delta.grid()), params_(params), delta_(delta.grid()) {
  for (std::size_t n = 0; n < delta.size(); ++n) delta_[n] = delta[n] >= kSupport ? delta[n] : 0.0;
  if (grid_.boundary != core::Boundary::periodic) throw std::invalid_argument("transport needs a periodic grid");
  core::require_same_grid(grid_, P.grid(), "TransportStepper: P");
  if (v) core::require_same_grid(grid_, v->grid(), "TransportStepper: v");
  if (!(params.D > 0.0)) throw std::invalid_argument("D must be positive");
  if (params.a_pro < 0.0 || !(params.a_lip > 0.0)) throw std::invalid_argument("invalid protein or lipid size");
  if (!P.all_finite()) throw std::invalid_argument("drift potential is not finite everywhere");

  const std::size_t N = grid_.size();
  for (int a = 0; a < 3; ++a) {
    face_delta_[a].assign(N, 0.0);
    face_drift_[a].assign(N, 0.0);
    face_adv_[a].assign(N, 0.0);
  }
  double dmax = 0.0;
  for (int k = 0; k < grid_.dims[2]; ++k)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int i = 0; i < grid_.dims[0]; ++i) {
        const std::size_t n = grid_.index(i, j, k);
        dmax = std::max(dmax, delta_[n]);
        for (int a = 0; a < 3; ++a) {
          const std::size_t m = neighbour(grid_, i, j, k, a);
          // Geometric mean: delta decays exponentially off the membrane.
          const double df = std::sqrt(delta_[n] * delta_[m]);
          face_delta_[a][n] = df;
          face_drift_[a][n] = params.D * params.chi * df * (P[m] - P[n]) / grid_.spacing[a];
          if (v) face_adv_[a][n] = df * 0.5 * (v->component(a)[n] + v->component(a)[m]);
          if (df > 0.0) {
            const double w = std::min(delta_[n], delta_[m]);
            max_speed_ = std::max(max_speed_, (std::abs(face_drift_[a][n]) + std::abs(face_adv_[a][n])) / w);
          }
        }
      }
  dbar_ = dmax > 0.0 ? params.D : 0.0;
  if (dbar_ > 0.0) solver_ = std::make_unique<core::SpectralHelmholtz>(grid_);
}

TransportStepper::~TransportStepper() = default;

double TransportStepper::drift_dt_limit() const {
  if (max_speed_ == 0.0) return std::numeric_limits<double>::infinity();
  const double h = std::min({grid_.spacing[0], grid_.spacing[1], grid_.spacing[2]});
  return h / (6.0 * max_speed_);
}

ScalarField3D TransportStepper::explicit_rate(const ScalarField3D& rho) const {
  const Grid3D& g = grid_;
  const std::size_t N = g.size();
  const bool crowding = params_.a_pro > 0.0;
  std::vector<double> Rsize;
  if (crowding) {
    const double a2 = params_.a_pro * params_.a_pro;
    const double ratio = a2 / (params_.a_lip * params_.a_lip);
    Rsize.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
      const double arg = 1.0 - std::max(rho[n], 0.0) * a2;
      if (!(arg > 0.0)) {
        throw std::invalid_argument("protein density exceeds the packing limit 1/a_pro^2 at node " +
                                    std::to_string(n));
      }
      Rsize[n] = -ratio * std::log(arg);
    }
  }
  ScalarField3D rate(g);
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const std::size_t n = g.index(i, j, k);
        for (int a = 0; a < 3; ++a) {
          const std::size_t m = neighbour(g, i, j, k, a);
          const double h = g.spacing[a];
          const double df = face_delta_[a][n];
          if (df == 0.0) continue;
          // Flux from n to m.
          double F = -params_.D * df * (rho[m] - rho[n]) / h;
          double u = face_drift_[a][n] + face_adv_[a][n];
          if (crowding) u -= params_.D * df * (Rsize[m] - Rsize[n]) / h;
          F += u * (u > 0.0 ? rho[n] : rho[m]);
          rate[n] -= F / (h * delta_[n]);
          rate[m] += F / (h * delta_[m]);
        }
      }
  if (dbar_ > 0.0) {
    const ScalarField3D lap = core::laplacian3d(rho);
    for (std::size_t n = 0; n < N; ++n) rate[n] -= dbar_ * lap[n];
  }
  return rate;
}

void TransportStepper::step(ScalarField3D& rho, double dt) {
  core::require_same_grid(grid_, rho.grid(), "TransportStepper::step: rho");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double limit = drift_dt_limit();
  if (dt > limit) {
    throw std::invalid_argument("dt " + std::to_string(dt) + " exceeds the drift limit " + std::to_string(limit));
  }
  const ScalarField3D rate = explicit_rate(rho);
  ScalarField3D next(grid_);
  for (std::size_t n = 0; n < rho.size(); ++n) next[n] = rho[n] + dt * rate[n];
  if (solver_) {
    const double a = 1.0 / (dt * dbar_);
    for (std::size_t n = 0; n < next.size(); ++n) next[n] *= a;
    next = solver_->solve(next, a);
  }

  double total = 0.0, clipped = 0.0;
  for (std::size_t n = 0; n < next.size(); ++n) total += next[n];
  for (std::size_t n = 0; n < next.size(); ++n) {
    if (next[n] < 0.0) {
      if (next[n] < -1e-10) ++diag_.clipped_nodes;
      clipped -= next[n];
      next[n] = 0.0;
    }
  }
  if (clipped > 0.0) {
    diag_.clipped_mass += clipped * grid_.cell_volume();
    const double positive = total + clipped;
    const double scale = total / positive;
    for (std::size_t n = 0; n < next.size(); ++n) next[n] *= scale;
  }
  rho = std::move(next);
}

}  // namespace geoflow::localization
