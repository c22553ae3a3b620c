#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "geoflow/core/mesh.hpp"

namespace geoflow::io {
class RunConfig;
class Rng;
}

namespace geoflow::patterns {

using core::SurfaceField;
using core::SurfaceMesh;
using core::Vec3;

// ---- hybrid lipids ----

struct HybridLipidParams {
  double V1 = 0.9, V2 = 0.9;  // chain volumes, nm^3
  double w1 = 0.8, w2 = 0.8;  // headgroup spacings, nm
  double B = 1.0;             // mismatch-cost ratio
  double k_s = 0.0, k_u = 0.0, gamma_hyb = 0.0;

  double wT() const { return 0.5 * (w1 + w2); }
  double wd() const { return w1 - w2; }
  double VT() const { return 0.5 * (V1 + V2); }
  double Vd() const { return V1 - V2; }
  double L1_0() const { return V1 / (w1 * w1); }
  double L2_0() const { return V2 / (w2 * w2); }
};

/// Linear-order spontaneous geodesic curvature
/// (1/w_T)[(1-2B) w_d / ((1+2B) w_T) + 2B V_d / ((1+2B) V_T)].
double spontaneous_geodesic_curvature(const HybridLipidParams& p);

/// k_s (L1 - L1_0)^2 + k_u (L2 - L2_0)^2 + gamma_hyb (L1 - L2)^2.
double hybrid_interface_energy(double L1, double L2, const HybridLipidParams& p);

// ---- energies and variations ----

struct PatternParams {
  double epsilon = 0.1;
  double k = 0.01;
  double H_c = 1.0 / 0.3;
  double dt = 1e-3;
  double eps_psi = 1e-6;
  int max_inner = 100;
  double sigma_gl = 0.01;
  double pcg_tol = 1e-10;

  /// Throws std::invalid_argument when a positive parameter is not.
  void validate() const;
};

inline double double_well(double phi) { return 0.25 * phi * phi * phi * phi - 0.5 * phi * phi; }
inline double double_well_prime(double phi) { return phi * phi * phi - phi; }

/// sum_i A_i f(phi_i) + (sigma/2) phi^T (-L) phi.
double ginzburg_landau_energy(const SurfaceMesh& mesh, std::span<const double> phi, double sigma);

/// Area-normalised gradient f'(phi) - sigma Delta phi.
SurfaceField ginzburg_landau_variation(const SurfaceMesh& mesh, std::span<const double> phi, double sigma);

/// sum_i A_i (k eps / 2) E_i^2 with E = Delta phi + (phi + H_c eps)(1 - phi^2) / eps^2.
double geodesic_energy(const SurfaceMesh& mesh, std::span<const double> phi, const PatternParams& p);

struct GeodesicVariation {
  SurfaceField W;          // eps Delta phi - (phi + H_c eps)(phi^2 - 1) / eps
  SurfaceField W_L;        // eps Delta phi + phi / eps + H_c
  SurfaceField W_N;        // -phi^3 / eps - H_c phi^2
  SurfaceField variation;  // k [Delta W - (3 phi^2 + 2 H_c eps phi - 1) W / eps^2]
};

/// Exact area-normalised gradient of geodesic_energy.
GeodesicVariation geodesic_variation(const SurfaceMesh& mesh, std::span<const double> phi, const PatternParams& p);

/// Area-weighted mean.
double lagrange_multiplier(const SurfaceMesh& mesh, std::span<const double> variation);

// ---- steppers ----

struct StepResult {
  SurfaceField phi;
  int inner_iterations = 0;
  bool converged = false;
};

/// One Crank-Nicolson step of the conserved geodesic flow with the interior
/// iteration: each sweep solves (M/dt + (k eps/2) L M^-1 L) psi = M rhs by PCG, with the
/// multiplier chosen so that the area integral of psi equals that of phi_n.
StepResult cn_interior_step(const SurfaceMesh& mesh, std::span<const double> phi_n, const PatternParams& p);

/// Explicit step limit 2 / (sigma * spectral_bound + 2) for the Allen-Cahn baseline.
double allen_cahn_stable_dt(const SurfaceMesh& mesh, double sigma);

/// phi - dt (f'(phi) - sigma Delta phi - lambda). Throws std::invalid_argument above
/// allen_cahn_stable_dt.
SurfaceField allen_cahn_step(const SurfaceMesh& mesh, std::span<const double> phi, double sigma, double dt);

/// Clamps to [-bound, bound] and restores the area integral by shifting the
/// unclamped vertices.
void clamp_conserving(const SurfaceMesh& mesh, SurfaceField& phi, double target_mass, double bound = 1.05);

// ---- curvature ----

/// sqrt(2) eps (Delta phi + (1 - phi^2) phi / eps^2) / max(1 - phi^2, 0.01) on the band
/// |phi| <= 0.9, quiet NaN elsewhere.
SurfaceField phase_to_geodesic_curvature(const SurfaceMesh& mesh, std::span<const double> phi, double epsilon);

// ---- domains ----

struct Cluster {
  std::vector<int> members;
  double area = 0.0;
  Vec3 centroid{};
  double radius = 0.0;  // sqrt(area / pi)
};

struct DomainReport {
  std::vector<Cluster> clusters;
  double mean_radius = 0.0;
  double area_weighted_radius = 0.0;
  double min_radius = 0.0;
  double max_radius = 0.0;
  double positive_area = 0.0;
  double silhouette = 0.0;  // of the chosen partition; 0 for a single cluster
};

/// K-means (k-means++ start, area weights) on the vertices with phi > 0. With
/// k_clusters = 0 the k in [k_min, k_max] with the largest silhouette is used.
/// Throws std::invalid_argument when no vertex has phi > 0 or k is out of range.
DomainReport kmeans_domain_analysis(const SurfaceMesh& mesh, std::span<const double> phi, int k_clusters,
                                    io::Rng& rng, int k_min = 2, int k_max = 12);

// ---- simulation ----

enum class PatternModel { geodesic, ginzburg_landau };

struct PatternRunOptions {
  PatternModel model = PatternModel::geodesic;
  double t_end = 7.0;
  double amplitude = 0.1;
  int trace_every = 1;
  int k_clusters = 0;
  int k_min = 2;
  int k_max = 12;
  std::uint64_t seed = 1;
};

struct TracePoint {
  double t, energy, mass;
};

struct PatternRun {
  SurfaceField phi;
  double t = 0.0;
  double mass0 = 0.0;
  std::vector<TracePoint> trace;
  /// Energy after every accepted step, including the initial state.
  std::vector<double> accepted_energy;
  std::vector<double> accepted_mass;
  int accepted_steps = 0;
  int rejected_steps = 0;
  DomainReport report;
};

/// Random start (uniform in [-amplitude, amplitude], shifted to zero mean), conserved
/// flow to t_end with step halving on rejected steps (energy increase or inner
/// non-convergence), then domain analysis.
PatternRun run_pattern_simulation(const SurfaceMesh& mesh, const PatternParams& p, const PatternRunOptions& opt);

PatternParams pattern_params_from_config(const io::RunConfig& cfg);
PatternRunOptions pattern_options_from_config(const io::RunConfig& cfg);

}  // namespace geoflow::patterns
