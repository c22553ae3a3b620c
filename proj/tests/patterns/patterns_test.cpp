#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geoflow/core/mesh.hpp"
#include "geoflow/error.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/io/rng.hpp"
#include "geoflow/patterns/patterns.hpp"

using namespace geoflow;
using namespace geoflow::patterns;

namespace {

std::vector<double> random_field(const SurfaceMesh& m, std::uint64_t seed, double amp) {
  io::Rng rng(seed);
  std::vector<double> f(m.vertex_count());
  for (double& v : f) v = rng.uniform(-amp, amp);
  return f;
}

template <class Energy>
double directional_fd(const std::vector<double>& phi, const std::vector<double>& dir, Energy E) {
  const double h = 1e-5;
  std::vector<double> a = phi, b = phi;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    a[i] += h * dir[i];
    b[i] -= h * dir[i];
  }
  return (E(a) - E(b)) / (2.0 * h);
}

double weighted(const SurfaceMesh& m, const std::vector<double>& g, const std::vector<double>& dir) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += m.vertex_areas()[i] * g[i] * dir[i];
  return s;
}

// tanh((theta - theta0) / (sqrt(2) eps)): phi < 0 on the polar cap theta < theta0.
std::vector<double> cap_profile(const SurfaceMesh& m, double theta0, double eps) {
  std::vector<double> phi(m.vertex_count());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double theta = std::acos(std::clamp(m.vertices()[i][2], -1.0, 1.0));
    phi[i] = std::tanh((theta - theta0) / (std::sqrt(2.0) * eps));
  }
  return phi;
}

double band_mean(const SurfaceMesh& m, const std::vector<double>& phi, const std::vector<double>& k) {
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (std::abs(phi[i]) > 0.5) continue;
    s += m.vertex_areas()[i] * k[i];
    w += m.vertex_areas()[i];
  }
  return s / w;
}

}  // namespace

TEST_SUITE("patterns") {

TEST_CASE("double well") {
  CHECK(double_well(1.0) == -0.25);
  CHECK(double_well(0.0) == 0.0);
  CHECK(double_well_prime(1.0) == 0.0);
  CHECK(double_well_prime(0.5) == -0.375);
}

TEST_CASE("hybrid lipid spontaneous geodesic curvature") {
  HybridLipidParams p;
  CHECK(spontaneous_geodesic_curvature(p) == 0.0);
  // w_T = 0.8, w_d = 0.2, equal volumes, B = 1: (1/0.8)(-1)(0.2)/(3 * 0.8).
  p.w1 = 0.9;
  p.w2 = 0.7;
  CHECK(spontaneous_geodesic_curvature(p) == doctest::Approx(-0.2 / (0.8 * 3.0 * 0.8)));
  // B = 0 keeps only the headgroup term: w_d / w_T^2.
  p.B = 0.0;
  CHECK(spontaneous_geodesic_curvature(p) == doctest::Approx(0.2 / 0.64));
  // Volume mismatch alone, B = 1: (1/w_T)(2/3)(V_d/V_T).
  HybridLipidParams v;
  v.V1 = 1.0;
  v.V2 = 0.8;
  CHECK(spontaneous_geodesic_curvature(v) == doctest::Approx((1.0 / 0.8) * (2.0 / 3.0) * (0.2 / 0.9)));
  v.B = -1.0;
  CHECK_THROWS_AS(spontaneous_geodesic_curvature(v), std::invalid_argument);

  HybridLipidParams e;
  e.k_s = 2.0;
  e.k_u = 1.0;
  e.gamma_hyb = 0.5;
  CHECK(hybrid_interface_energy(e.L1_0(), e.L2_0(), e) == doctest::Approx(0.0));
  CHECK(hybrid_interface_energy(e.L1_0() + 0.1, e.L2_0(), e) == doctest::Approx(2.0 * 0.01 + 0.5 * 0.01));
}

TEST_CASE("geodesic variation matches finite differences on random fields") {
  const SurfaceMesh m = core::make_icosphere(2);
  PatternParams p;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto phi = random_field(m, seed, 1.0);
    const auto dir = random_field(m, 100 + seed, 1.0);
    const auto var = geodesic_variation(m, phi, p);
    const double fd = directional_fd(phi, dir, [&](const auto& f) { return geodesic_energy(m, f, p); });
    CAPTURE(seed);
    CHECK(fd == doctest::Approx(weighted(m, var.variation, dir)).epsilon(1e-4));
  }
}

TEST_CASE("geodesic variation pieces") {
  const SurfaceMesh m = core::make_icosphere(1);
  PatternParams p;
  const auto phi = random_field(m, 3, 0.8);
  const auto v = geodesic_variation(m, phi, p);
  double G = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    CHECK(v.W[i] == doctest::Approx(v.W_L[i] + v.W_N[i]).epsilon(1e-12));
    G += m.vertex_areas()[i] * p.k * v.W[i] * v.W[i] / (2.0 * p.epsilon);
  }
  CHECK(geodesic_energy(m, phi, p) == doctest::Approx(G).epsilon(1e-12));
  CHECK(lagrange_multiplier(m, std::vector<double>(m.vertex_count(), 2.5)) == doctest::Approx(2.5));
}

TEST_CASE("Ginzburg-Landau variation matches finite differences") {
  const SurfaceMesh m = core::make_icosphere(2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto phi = random_field(m, seed, 1.0);
    const auto dir = random_field(m, 50 + seed, 1.0);
    const auto var = ginzburg_landau_variation(m, phi, 0.01);
    const double fd = directional_fd(phi, dir, [&](const auto& f) { return ginzburg_landau_energy(m, f, 0.01); });
    CHECK(fd == doctest::Approx(weighted(m, var, dir)).epsilon(1e-6));
  }
}

TEST_CASE("Crank-Nicolson step conserves mass and lowers the energy") {
  const SurfaceMesh m = core::make_geodesic_sphere(8);
  PatternParams p;
  p.H_c = 2.5;
  auto phi = random_field(m, 4, 0.1);
  const double mean = core::surface_mean(m, phi);
  for (double& v : phi) v -= mean;
  const double mass0 = core::surface_integral(m, phi);
  double G = geodesic_energy(m, phi, p);
  for (int step = 0; step < 5; ++step) {
    const StepResult r = cn_interior_step(m, phi, p);
    REQUIRE(r.converged);
    CHECK(r.inner_iterations <= p.max_inner);
    CHECK(std::abs(core::surface_integral(m, r.phi) - mass0) <= 1e-12 * m.total_area());
    const double G1 = geodesic_energy(m, r.phi, p);
    CHECK(G1 <= G);
    G = G1;
    phi = r.phi;
  }
}

TEST_CASE("explicit Allen-Cahn baseline") {
  const SurfaceMesh m = core::make_icosphere(2);
  const double limit = allen_cahn_stable_dt(m, 0.01);
  CHECK(limit == doctest::Approx(2.0 / (0.01 * m.laplacian_spectral_bound() + 2.0)));
  const auto phi = random_field(m, 8, 0.5);
  CHECK_THROWS_AS(allen_cahn_step(m, phi, 0.01, 1.01 * limit), std::invalid_argument);
  const auto next = allen_cahn_step(m, phi, 0.01, 0.5 * limit);
  CHECK(core::surface_integral(m, next) == doctest::Approx(core::surface_integral(m, phi)).epsilon(1e-12));
  CHECK(ginzburg_landau_energy(m, next, 0.01) < ginzburg_landau_energy(m, phi, 0.01));
}

TEST_CASE("conserving clamp") {
  const SurfaceMesh m = core::make_icosphere(2);
  auto phi = random_field(m, 12, 1.4);
  const double target = core::surface_integral(m, phi);
  clamp_conserving(m, phi, target);
  for (double v : phi) CHECK(std::abs(v) <= 1.05 + 1e-12);
  CHECK(core::surface_integral(m, phi) == doctest::Approx(target).epsilon(1e-10));
}

TEST_CASE("phase-field geodesic curvature of caps and great circles") {
  const SurfaceMesh m = core::make_icosphere(5);
  const auto cap = cap_profile(m, std::numbers::pi / 4.0, 0.05);
  const auto k = phase_to_geodesic_curvature(m, cap, 0.05);
  CHECK(band_mean(m, cap, k) == doctest::Approx(1.0).epsilon(0.1));
  const auto equator = cap_profile(m, std::numbers::pi / 2.0, 0.05);
  CHECK(std::abs(band_mean(m, equator, phase_to_geodesic_curvature(m, equator, 0.05))) < 0.05);
  std::size_t pole = 0;
  for (std::size_t i = 0; i < m.vertex_count(); ++i)
    if (m.vertices()[i][2] > m.vertices()[pole][2]) pole = i;
  CHECK(std::isnan(k[pole]));
}

TEST_CASE("k-means finds two antipodal caps") {
  const SurfaceMesh m = core::make_icosphere(4);
  const double theta0 = 0.4;
  std::vector<double> phi(m.vertex_count(), -1.0);
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (std::abs(m.vertices()[i][2]) > std::cos(theta0)) phi[i] = 1.0;
  io::Rng rng(1);
  const DomainReport r = kmeans_domain_analysis(m, phi, 0, rng);
  REQUIRE(r.clusters.size() == 2);
  const double cap_area = 2.0 * std::numbers::pi * (1.0 - std::cos(theta0));
  for (const auto& c : r.clusters) {
    CHECK(c.area == doctest::Approx(cap_area).epsilon(0.05));
    CHECK(c.radius == doctest::Approx(std::sqrt(c.area / std::numbers::pi)));
  }
  CHECK(r.clusters[0].centroid[2] * r.clusters[1].centroid[2] < 0.0);
  CHECK(r.silhouette > 0.8);
  CHECK(r.positive_area == doctest::Approx(r.clusters[0].area + r.clusters[1].area));

  io::Rng one(1);
  CHECK(kmeans_domain_analysis(m, phi, 1, one).clusters.size() == 1);
  std::vector<double> none(m.vertex_count(), -1.0);
  CHECK_THROWS_AS(kmeans_domain_analysis(m, none, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(kmeans_domain_analysis(m, phi, 0, rng, 5, 3), std::invalid_argument);
}

TEST_CASE("pattern simulation dissipates energy, conserves mass and is reproducible") {
  const SurfaceMesh m = core::make_geodesic_sphere(8);
  PatternParams p;
  p.H_c = 2.5;
  p.dt = 2e-3;
  PatternRunOptions o;
  o.t_end = 0.2;
  o.seed = 5;
  for (PatternModel model : {PatternModel::geodesic, PatternModel::ginzburg_landau}) {
    o.model = model;
    const PatternRun a = run_pattern_simulation(m, p, o);
    for (std::size_t i = 1; i < a.accepted_energy.size(); ++i) {
      CHECK(a.accepted_energy[i] <= a.accepted_energy[i - 1] + 1e-8 * std::abs(a.accepted_energy[i - 1]));
      CHECK(std::abs(a.accepted_mass[i] - a.mass0) <= 1e-6 * m.total_area());
    }
    CHECK(a.t == doctest::Approx(o.t_end));
    const PatternRun b = run_pattern_simulation(m, p, o);
    CHECK(a.phi == b.phi);
    PatternRunOptions other = o;
    other.seed = 6;
    CHECK(run_pattern_simulation(m, p, other).phi != a.phi);
  }
}

TEST_CASE("config adapters") {
  io::RunConfig c = io::RunConfig::defaults(io::Model::rafts);
  c.set("pattern.H_c", "2.5");
  CHECK(pattern_params_from_config(c).H_c == 2.5);
  c.set("hybrid.enabled", "true");
  c.set("hybrid.w1", "0.9");
  c.set("hybrid.w2", "0.7");
  CHECK(pattern_params_from_config(c).H_c == doctest::Approx(std::sqrt(2.0) * -0.2 / (0.8 * 3.0 * 0.8)));
  c.set("analysis.k_min", "5");
  c.set("analysis.k_max", "4");
  CHECK_THROWS_AS(pattern_options_from_config(c), ConfigError);
  c.set("pattern.model", "gl");
  c.set("analysis.k_max", "6");
  CHECK(pattern_options_from_config(c).model == PatternModel::ginzburg_landau);
}

}  // TEST_SUITE
