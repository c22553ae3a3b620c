#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "geoflow/error.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/localization/localization.hpp"

namespace geoflow::localization {

ScalarField3D initial_protein_density(double R, double r, const ScalarField3D& phi) {
  const Grid3D& g = phi.grid();
  ScalarField3D rho = ScalarField3D::sample(g, [&](const Vec3& x) {
    const double planar = std::hypot(x[0], x[1]);
    const Vec3 c = planar > 0.0 ? Vec3{R * x[0] / planar, R * x[1] / planar, 0.0} : Vec3{0.0, R, 0.0};
    Vec3 off{x[0] - c[0], x[1] - c[1], x[2]};
    double len = std::sqrt(off[0] * off[0] + off[1] * off[1] + off[2] * off[2]);
    if (len == 0.0) {
      off = {c[0] / R, c[1] / R, 0.0};
      len = 1.0;
    }
    const Vec3 y{c[0] + r * off[0] / len, c[1] + r * off[1] / len, r * off[2] / len};
    const double top = std::sqrt(y[0] * y[0] + (y[1] - R) * (y[1] - R) + y[2] * y[2]);
    const double tube = std::sqrt((y[0] - c[0]) * (y[0] - c[0]) + (y[1] - c[1]) * (y[1] - c[1]) + y[2] * y[2]);
    return std::exp(-top) * std::exp(-2.0 * (r - tube));
  });
  double peak = 0.0;
  for (std::size_t n = 0; n < rho.size(); ++n) {
    if (std::abs(phi[n]) <= 0.9) peak = std::max(peak, rho[n]);
  }
  if (peak == 0.0) throw std::invalid_argument("initial density: no band nodes");
  for (std::size_t n = 0; n < rho.size(); ++n) rho[n] /= peak;
  return rho;
}

RingMasses ring_masses(const ScalarField3D& rho, const ScalarField3D& delta, double R) {
  const Grid3D& g = rho.grid();
  RingMasses m;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const Vec3 x = g.position(i, j, k);
        const double q = x[0] * x[0] + x[1] * x[1];
        const std::size_t n = g.index(i, j, k);
        const double v = delta[n] * rho[n];
        if (q > R * R) m.outer += v;
        else if (q < R * R) m.inner += v;
      }
  m.outer *= g.cell_volume();
  m.inner *= g.cell_volume();
  return m;
}

LocalizationResult run_localization(const LocalizationOptions& opt) {
  if (!(opt.dt > 0.0 && opt.t_end > 0.0 && opt.sample_every > 0.0)) {
    throw std::invalid_argument("dt, t_end and sample_every must be positive");
  }
  const Grid3D grid = Grid3D::cube(-opt.half_width, opt.half_width, opt.n, core::Boundary::periodic);
  LocalizationResult res{torus_phase_field(opt.R, opt.r, grid, opt.epsilon, opt.profile),
                         ScalarField3D(grid), ScalarField3D(grid), ScalarField3D(grid), 0.0, 0.0, 0.0, {}, {}};
  res.delta = delta_band(res.membrane.phi);

  // Lipid background covering the membrane, no protein contribution to H0.
  SpeciesParams species;
  species.C0_pro = opt.C0_pro;
  species.a_pro = 0.0;
  species.D = opt.D;
  species.kT = opt.kT;
  species.lipids.push_back({opt.C0_lip, opt.a_lip, 1.0 / (opt.a_lip * opt.a_lip)});
  const ScalarField3D H0 = spontaneous_curvature_field(species, ScalarField3D(grid));
  res.H0 = H0[0];
  res.P = drift_potential_P(res.membrane, H0);

  double pmax = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (std::abs(res.membrane.phi[n]) <= 0.9) pmax = std::max(pmax, std::abs(res.P[n]));
  }
  if (opt.C0_pro != 0.0 && pmax > 0.0) {
    res.chi = (opt.C0_pro > 0.0 ? 1.0 : -1.0) * opt.drift_strength / pmax;
  }

  TransportStepper stepper(res.delta, res.P, {opt.D, res.chi, opt.a_pro, opt.a_lip});
  res.rho = initial_protein_density(opt.R, opt.r, res.membrane.phi);

  auto sample = [&](double t) {
    const RingMasses m = ring_masses(res.rho, res.delta, opt.R);
    double total = 0.0, peak = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      total += res.delta[n] * res.rho[n];
      peak = std::max(peak, res.rho[n]);
    }
    res.trace.push_back({t, total * grid.cell_volume(), m.outer_fraction(), m.inner_fraction(), peak});
  };
  sample(0.0);
  const long steps = std::max(1L, std::lround(opt.t_end / opt.dt));
  const long every = std::max(1L, std::lround(opt.sample_every / opt.dt));
  const double dt = opt.t_end / static_cast<double>(steps);
  for (long s = 1; s <= steps; ++s) {
    stepper.step(res.rho, dt);
    if (!res.rho.all_finite()) throw NumericalError("protein density became non-finite at step " + std::to_string(s));
    if (s % every == 0 || s == steps) sample(static_cast<double>(s) * dt);
  }
  res.t = static_cast<double>(steps) * dt;
  res.diagnostics = stepper.diagnostics();
  return res;
}

LocalizationOptions localization_options_from_config(const io::RunConfig& cfg) {
  LocalizationOptions o;
  o.R = cfg.real("torus.R");
  o.r = cfg.real("torus.r");
  o.n = static_cast<int>(cfg.integer("grid.n"));
  o.half_width = cfg.real("grid.half_width");
  o.epsilon = cfg.real("phase.epsilon");
  o.profile = cfg.str("phase.profile") == "signed_distance" ? Profile::signed_distance : Profile::tanh;
  o.C0_pro = cfg.real("species.C0_pro");
  o.C0_lip = cfg.real("species.C0_lip");
  o.a_pro = cfg.real("species.a_pro");
  o.a_lip = cfg.real("species.a_lip");
  o.D = cfg.real("species.D");
  o.kT = cfg.real("species.kT");
  o.drift_strength = cfg.real("species.drift_strength");
  o.dt = cfg.real("time.dt");
  o.t_end = cfg.real("time.t_end");
  o.sample_every = cfg.real("time.sample_every");
  if (!(o.R > o.r)) throw ConfigError("torus.R must exceed torus.r");
  if (o.R + o.r + 5.0 * o.epsilon > o.half_width) {
    throw ConfigError("grid.half_width too small for the torus and a 5 epsilon margin");
  }
  return o;
}

}  // namespace geoflow::localization
