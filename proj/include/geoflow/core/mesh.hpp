#pragma once

#include <array>
#include <span>
#include <vector>

#include "geoflow/core/grid.hpp"
#include "geoflow/core/sparse.hpp"

namespace geoflow::core {

using Triangle = std::array<int, 3>;

/// One real per mesh vertex.
using SurfaceField = std::vector<double>;

/// Closed, consistently oriented triangle mesh with its cotangent Laplacian and
/// barycentric lumped vertex areas precomputed. Immutable after construction.
class SurfaceMesh {
 public:
  /// Validates the closed 2-manifold and non-degeneracy invariants; throws
  /// std::invalid_argument naming the first violation. `require_closed = false` admits
  /// boundary edges (each interior edge still shared by exactly two triangles).
  static SurfaceMesh build(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                           bool require_closed = true);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  /// Lumped (one third of incident triangle areas) vertex areas.
  std::span<const double> vertex_areas() const { return areas_; }
  double total_area() const { return total_area_; }

  /// Weak-form cotangent Laplacian: (L u)_i = sum_j w_ij (u_j - u_i), symmetric.
  const CsrMatrix& weak_laplacian() const { return weak_; }

  /// Gershgorin upper bound on the spectrum of -M^{-1} L.
  double laplacian_spectral_bound() const { return spectral_bound_; }

  double mean_edge_length() const { return mean_edge_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<double> areas_;
  CsrMatrix weak_;
  double total_area_ = 0.0;
  double spectral_bound_ = 0.0;
  double mean_edge_ = 0.0;
  std::size_t edge_count_ = 0;
};

/// Recursive midpoint subdivision of the icosahedron projected to the unit sphere:
/// 10*4^n + 2 vertices. Accepts 0 <= n <= 7.
SurfaceMesh make_icosphere(int subdivisions);

/// Frequency-f geodesic subdivision of the icosahedron on the unit sphere:
/// 10 f^2 + 2 vertices (f = 10 gives 1002, f = 19 gives 3612). Accepts 1 <= f <= 128.
SurfaceMesh make_geodesic_sphere(int frequency);

/// (Delta u)_i = (1/A_i) sum_j w_ij (u_j - u_i).
SurfaceField laplace_beltrami_apply(const SurfaceMesh& mesh, std::span<const double> u);

/// L u without the mass inverse.
SurfaceField weak_laplacian_apply(const SurfaceMesh& mesh, std::span<const double> u);

/// sum_i A_i u_i.
double surface_integral(const SurfaceMesh& mesh, std::span<const double> u);

/// Area-weighted mean.
double surface_mean(const SurfaceMesh& mesh, std::span<const double> u);

void require_field_on(const SurfaceMesh& mesh, std::span<const double> u, const char* what);

}  // namespace geoflow::core
