#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "geoflow/core/grid.hpp"

namespace geoflow::core {
class SpectralHelmholtz;
}
namespace geoflow::io {
class RunConfig;
}

namespace geoflow::localization {

using core::Grid3D;
using core::ScalarField3D;
using core::Vec3;
using core::VectorField3D;

// ---- membrane ----

enum class Profile { tanh, signed_distance };

struct MembranePhaseField {
  ScalarField3D phi;
  double epsilon = 0.1;
  Profile profile = Profile::tanh;
};

/// Signed distance r - sqrt((R - sqrt(x^2 + y^2))^2 + z^2), positive inside the tube.
double torus_signed_distance(double R, double r, const Vec3& x);

/// Tube angle of the nearest surface point: 0 on the outer equator, pi on the inner.
double torus_tube_angle(double R, const Vec3& x);

/// tanh(d / (sqrt(2) eps)), or d itself for the signed-distance profile. Throws
/// std::invalid_argument unless R > r > 0, the grid is periodic and the torus keeps a
/// 5 eps margin from the domain boundary.
MembranePhaseField torus_phase_field(double R, double r, const Grid3D& grid, double epsilon,
                                     Profile profile = Profile::tanh);

/// (R + 2 r cos theta) / (2 r (R + r cos theta)). Throws std::invalid_argument for R <= r.
double analytic_torus_mean_curvature(double R, double r, double theta);

/// -sqrt(2) eps (Delta phi + phi (1 - phi^2) / eps^2) / (2 max(1 - phi^2, 0.01)) on the
/// band |phi| <= 0.9, quiet NaN elsewhere. The sign makes H the mean curvature with
/// respect to the outward normal of the phi > 0 region (positive on a sphere).
ScalarField3D mean_curvature_phase_field(const ScalarField3D& phi, double epsilon);

/// tanh(10 (phi + 1)) on [-1, 0], -tanh(10 (phi - 1)) on [0, 1]; phi is clamped to [-1, 1].
double delta_band(double phi);
ScalarField3D delta_band(const ScalarField3D& phi);

// ---- chemistry ----

struct LipidSpecies {
  double C0 = 0.0;       // spontaneous curvature
  double a = 1.0;        // size
  double density = 0.0;  // per area
};

struct SpeciesParams {
  double C0_pro = 0.5;
  double a_pro = 0.0;
  double D = 1.0;
  double kT = 1.0;
  std::vector<LipidSpecies> lipids;

  /// Throws std::invalid_argument on negative sizes or non-positive D, kT.
  void validate() const;
};

/// sqrt(2) (sum_l C0_l a_l^2 rho_l + C0_pro a_pro^2 rho) per node. Throws
/// std::invalid_argument where the coverage sum_l a_l^2 rho_l + a_pro^2 rho differs from 1
/// by more than 1e-6.
ScalarField3D spontaneous_curvature_field(const SpeciesParams& s, const ScalarField3D& rho);

/// H - H0 with H from mean_curvature_phase_field, taken at the closest point of the
/// phi = 0 surface, so that P is constant along the membrane normal. The closest point
/// uses the distance recovered from the profile; nodes where the profile saturates are
/// filled by layered neighbour averaging.
ScalarField3D drift_potential_P(const MembranePhaseField& m, const ScalarField3D& H0);

/// Band-only H - H0 (quiet NaN off the band), before any extension.
ScalarField3D band_potential(const ScalarField3D& phi, double epsilon, const ScalarField3D& H0);

/// kT (ln(max(rho, 1e-12) a_pro^2) + R) - 2 C0_pro a_pro^2 P with the size term
/// R = -(a_pro / a_lip)^2 ln(1 - rho a_pro^2 - sum_l rho_l a_l^2). With a_pro = 0 the
/// logarithm uses rho alone. The drift term carries the sign of the (H - H0)^2
/// variation, so proteins with C0_pro > 0 gather where P is largest. Throws std::invalid_argument where the saturation
/// argument is not in (0, 1].
ScalarField3D chemical_potential(const ScalarField3D& rho, const SpeciesParams& s, const ScalarField3D& P);

// ---- transport ----

struct TransportParams {
  double D = 1.0;
  /// Drift mobility: the drift velocity is D chi grad P, so proteins climb P for chi > 0.
  double chi = 0.0;
  /// Protein size for the crowding term; 0 disables it.
  double a_pro = 0.0;
  double a_lip = 1.0;
};

struct TransportDiagnostics {
  int clipped_nodes = 0;
  double clipped_mass = 0.0;
};

/// Stabilised splitting for the surface-conservative transport
///   delta d rho/dt = div(D delta grad rho - D chi delta rho grad P - D delta rho grad R - delta v rho).
/// D Lap rho is implicit through the spectral Helmholtz solve; the remainder (face
/// fluxes over delta, minus D Lap rho) is explicit with upwinded drift. Fluxes vanish at
/// nodes with delta < 1e-3, so rho there changes only by the O(dt^2) splitting error,
/// which also bounds the per-step change of the delta-weighted amount.
class TransportStepper {
 public:
  /// `v` may be null (no advection). Throws std::invalid_argument for non-periodic
  /// grids, grid mismatches or a non-positive D.
  TransportStepper(const ScalarField3D& delta, const ScalarField3D& P, const TransportParams& params,
                   const VectorField3D* v = nullptr);
  ~TransportStepper();

  /// Throws std::invalid_argument when dt exceeds drift_dt_limit().
  void step(ScalarField3D& rho, double dt);

  /// Explicit-part bound h / (6 max|face velocity|) (infinite without drift or flow).
  double drift_dt_limit() const;

  const TransportDiagnostics& diagnostics() const { return diag_; }
  double dbar() const { return dbar_; }

 private:
  ScalarField3D explicit_rate(const ScalarField3D& rho) const;

  Grid3D grid_;
  TransportParams params_;
  ScalarField3D delta_;
  std::array<std::vector<double>, 3> face_delta_;  // geometric-mean delta at face (n, n + e_axis)
  std::array<std::vector<double>, 3> face_drift_;  // D chi delta_f dP / h at the face
  std::array<std::vector<double>, 3> face_adv_;    // delta_f v . e_axis at the face
  double dbar_ = 0.0;
  double max_speed_ = 0.0;
  std::unique_ptr<core::SpectralHelmholtz> solver_;
  TransportDiagnostics diag_;
};

// ---- run ----

/// rho_scale exp(-|y - (0, R, 0)|) exp(-2 (r - |y - c(y)|)) evaluated at y, the torus point
/// closest to x (c(y) the tube-centre point in the plane of y), so the density is
/// constant along the membrane normal; rho_scale makes the band maximum one.
ScalarField3D initial_protein_density(double R, double r, const ScalarField3D& phi);

struct RingMasses {
  double outer = 0.0, inner = 0.0;
  double outer_fraction() const { return outer / (outer + inner); }
  double inner_fraction() const { return inner / (outer + inner); }
};

/// Integrals of delta rho over x^2 + y^2 > R^2 and x^2 + y^2 < R^2.
RingMasses ring_masses(const ScalarField3D& rho, const ScalarField3D& delta, double R);

struct LocalizationOptions {
  double R = 2.0, r = 1.1;
  int n = 96;
  double half_width = 4.0;
  double epsilon = 0.1;
  Profile profile = Profile::tanh;
  double C0_pro = 0.5, C0_lip = -0.1;
  double a_pro = 0.0, a_lip = 1.0;
  double D = 1.0, kT = 1.0;
  /// chi max|P| over the band; the sign of C0_pro picks the drift direction.
  double drift_strength = 5.0;
  double dt = 1e-3, t_end = 5.0, sample_every = 0.05;
};

struct LocalizationSample {
  double t, total_mass, outer_fraction, inner_fraction, max_rho;
};

struct LocalizationResult {
  MembranePhaseField membrane;
  ScalarField3D delta;
  ScalarField3D P;
  ScalarField3D rho;
  double t = 0.0;
  double chi = 0.0;
  double H0 = 0.0;
  std::vector<LocalizationSample> trace;
  TransportDiagnostics diagnostics;
};

/// Torus membrane, constant lipid-background H0 = sqrt(2) C0_lip, drift mobility
/// chi = sign(C0_pro) drift_strength / max|P|, transport to t_end with samples every
/// sample_every (and at t = 0 and t_end). total_mass is the integral of delta rho.
LocalizationResult run_localization(const LocalizationOptions& opt);

LocalizationOptions localization_options_from_config(const io::RunConfig& cfg);

}  // namespace geoflow::localization
