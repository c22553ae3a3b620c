#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "geoflow/cli/cli.hpp"
#include "geoflow/core/mesh.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/io/rng.hpp"
#include "geoflow/localization/localization.hpp"
#include "geoflow/patterns/patterns.hpp"
#include "geoflow/simd/kernels.hpp"
#include "geoflow/solvation/solvation.hpp"

namespace geoflow::cli {
namespace {

std::string str(double v) {
  std::ostringstream os;
  os.precision(5);
  os << v;
  return os.str();
}

CheckResult config_round_trip() {
  bool ok = true;
  for (io::Model m : {io::Model::solvate, io::Model::rafts, io::Model::localize}) {
    const io::RunConfig c = io::RunConfig::defaults(m);
    ok = ok && io::parse_config(c.serialize()) == c;
  }
  return {"config round trip", ok, "defaults of all three models"};
}

CheckResult simd_equivalence() {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (!v) return {"simd kernels", true, "AVX2 unavailable, scalar only"};
  std::vector<double> x(1003), y(1003);
  io::Rng rng(7);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform(-1.0, 1.0);
    y[i] = rng.uniform(-1.0, 1.0);
  }
  const double a = simd::scalar_kernels().dot(x.data(), y.data(), x.size());
  const double b = v->dot(x.data(), y.data(), x.size());
  const double rel = std::abs(a - b) / std::max(std::abs(a), 1e-300);
  return {"simd kernels", rel <= 1e-12, "avx2 vs scalar dot, relative difference " + str(rel)};
}

CheckResult icosphere_area() {
  const core::SurfaceMesh m = core::make_icosphere(4);
  const double rel = std::abs(m.total_area() - 4.0 * std::numbers::pi) / (4.0 * std::numbers::pi);
  return {"icosphere area", rel <= 5e-3, "subdivision 4, relative error " + str(rel)};
}

CheckResult lb_eigenfield() {
  const core::SurfaceMesh m = core::make_icosphere(4);
  std::vector<double> z(m.vertex_count());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = m.vertices()[i][2];
  const std::vector<double> lz = core::laplace_beltrami_apply(m, z);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double e = lz[i] + 2.0 * z[i];
    num += m.vertex_areas()[i] * e * e;
    den += m.vertex_areas()[i] * 4.0 * z[i] * z[i];
  }
  const double rel = std::sqrt(num / den);
  return {"Laplace-Beltrami l=1", rel <= 0.03, "relative L2 error " + str(rel)};
}

CheckResult born_ion() {
  solvation::SolvationParams p;
  p.eps_m = 1.0;
  p.eps_s = 78.0;
  p.gamma = p.rho0 = 0.0;
  const solvation::Atom ion{{0.0, 0.0, 0.0}, 1.0, 2.0, 0.0, 1.0};
  solvation::RunOptions o;
  o.h = 0.25;
  o.padding = 8.0;
  const std::span<const solvation::Atom> atoms(&ion, 1);
  const core::Grid3D g = solvation::solute_grid(atoms, o.h, o.padding);
  const core::ScalarField3D S = solvation::dielectric_sphere_surface(g, ion.position, 2.0, o.h, p.eps_m, p.eps_s);
  const double E = solvation::polar_solvation_energy(atoms, S, p, o);
  const double exact = solvation::born_energy(1.0, 2.0, p.eps_m, p.eps_s, p.coulomb);
  const double rel = std::abs(E - exact) / std::abs(exact);
  return {"Born ion", rel <= 0.05, "h = 0.25: " + str(E) + " vs " + str(exact) + " kcal/mol"};
}

CheckResult geodesic_gradient() {
  const core::SurfaceMesh m = core::make_icosphere(2);
  patterns::PatternParams p;
  io::Rng rng(11);
  std::vector<double> phi(m.vertex_count()), dir(m.vertex_count());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = rng.uniform(-0.9, 0.9);
    dir[i] = rng.uniform(-1.0, 1.0);
  }
  const auto var = patterns::geodesic_variation(m, phi, p).variation;
  double analytic = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) analytic += m.vertex_areas()[i] * var[i] * dir[i];
  const double h = 1e-5;
  std::vector<double> a = phi, b = phi;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    a[i] += h * dir[i];
    b[i] -= h * dir[i];
  }
  const double fd = (patterns::geodesic_energy(m, a, p) - patterns::geodesic_energy(m, b, p)) / (2.0 * h);
  const double rel = std::abs(fd - analytic) / std::abs(analytic);
  return {"geodesic energy gradient", rel <= 1e-4, "directional derivative, relative error " + str(rel)};
}

// Mean band curvature of the cap profile tanh((theta - theta0) / (sqrt(2) eps)).
double cap_curvature(const core::SurfaceMesh& m, double theta0, double eps) {
  std::vector<double> phi(m.vertex_count());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double theta = std::acos(std::clamp(m.vertices()[i][2], -1.0, 1.0));
    phi[i] = std::tanh((theta - theta0) / (std::sqrt(2.0) * eps));
  }
  const auto k = patterns::phase_to_geodesic_curvature(m, phi, eps);
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (std::abs(phi[i]) > 0.5) continue;
    s += m.vertex_areas()[i] * k[i];
    w += m.vertex_areas()[i];
  }
  return s / w;
}

CheckResult cap_geodesic_curvature() {
  const core::SurfaceMesh m = core::make_icosphere(5);
  const double cap = cap_curvature(m, std::numbers::pi / 4.0, 0.05);
  const double great = cap_curvature(m, std::numbers::pi / 2.0, 0.05);
  const bool ok = std::abs(cap - 1.0) <= 0.1 && std::abs(great) <= 0.05;
  return {"geodesic curvature", ok, "cap at pi/4 " + str(cap) + " (exact 1), great circle " + str(great)};
}

CheckResult torus_curvature() {
  const double outer = localization::analytic_torus_mean_curvature(2.0, 1.1, 0.0);
  const double inner = localization::analytic_torus_mean_curvature(2.0, 1.1, std::numbers::pi);
  const core::Grid3D g = core::Grid3D::cube(-4.0, 4.0, 128, core::Boundary::periodic);
  const auto mem = localization::torus_phase_field(2.0, 1.1, g, 0.1);
  const auto H = localization::mean_curvature_phase_field(mem.phi, 0.1);
  double so = 0.0, si = 0.0;
  int no = 0, ni = 0;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const std::size_t n = g.index(i, j, k);
        if (std::abs(mem.phi[n]) > 0.5) continue;
        const double th = localization::torus_tube_angle(2.0, g.position(i, j, k));
        if (std::abs(th) < 0.1) {
          so += H[n];
          ++no;
        } else if (std::abs(std::abs(th) - std::numbers::pi) < 0.1) {
          si += H[n];
          ++ni;
        }
      }
  so /= no;
  si /= ni;
  const bool ok = std::abs(so - outer) <= 0.1 * std::abs(outer) && std::abs(si - inner) <= 0.03;
  return {"torus mean curvature", ok,
          "128^3 outer " + str(so) + " vs " + str(outer) + ", inner " + str(si) + " vs " + str(inner)};
}

}  // namespace

std::vector<CheckResult> run_selftest() {
  using Check = CheckResult (*)();
  std::vector<CheckResult> out;
  for (Check c : {config_round_trip, simd_equivalence, icosphere_area, lb_eigenfield, born_ion, geodesic_gradient,
                  cap_geodesic_curvature, torus_curvature}) {
    try {
      out.push_back(c());
    } catch (const std::exception& e) {
      out.push_back({"check", false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace geoflow::cli
