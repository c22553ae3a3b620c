#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace geoflow::core {

enum class Boundary { periodic, dirichlet_zero };

using Vec3 = std::array<double, 3>;
using Index3 = std::array<int, 3>;

/// Uniform axis-aligned node grid. Node (i, j, k) sits at origin + (i hx, j hy, k hz);
/// storage is x-fastest.
struct Grid3D {
  Vec3 origin{0.0, 0.0, 0.0};
  Vec3 spacing{1.0, 1.0, 1.0};
  Index3 dims{4, 4, 4};
  Boundary boundary = Boundary::periodic;

  /// Validating constructor; throws std::invalid_argument on dims < 4 or h <= 0.
  static Grid3D make(Vec3 origin, Vec3 spacing, Index3 dims, Boundary boundary);

  /// Cubic grid covering [lo, hi]^3 with n nodes per axis. For periodic grids the
  /// node at hi is identified with lo, so h = (hi - lo) / n; otherwise h = (hi - lo) / (n - 1).
  static Grid3D cube(double lo, double hi, int n, Boundary boundary);

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(k));
  }
  Vec3 position(int i, int j, int k) const {
    return {origin[0] + i * spacing[0], origin[1] + j * spacing[1], origin[2] + k * spacing[2]};
  }
  /// Physical period along an axis (periodic grids).
  double period(int axis) const { return dims[axis] * spacing[axis]; }
  double cell_volume() const { return spacing[0] * spacing[1] * spacing[2]; }

  bool operator==(const Grid3D& o) const = default;
};

class ScalarField3D {
 public:
  explicit ScalarField3D(const Grid3D& grid, double fill = 0.0);
  ScalarField3D(const Grid3D& grid, std::vector<double> values);

  static ScalarField3D sample(const Grid3D& grid, const std::function<double(const Vec3&)>& f);

  const Grid3D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  double& operator[](std::size_t n) { return values_[n]; }
  double operator[](std::size_t n) const { return values_[n]; }
  double& at(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }

  /// Discrete integral: nodal sum times cell volume.
  double integral() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  Grid3D grid_;
  std::vector<double> values_;
};

/// Three components stored as separate arrays.
class VectorField3D {
 public:
  explicit VectorField3D(const Grid3D& grid);

  const Grid3D& grid() const { return grid_; }
  std::size_t size() const { return x_.size(); }
  std::vector<double>& component(int axis) { return axis == 0 ? x_ : axis == 1 ? y_ : z_; }
  const std::vector<double>& component(int axis) const { return axis == 0 ? x_ : axis == 1 ? y_ : z_; }
  Vec3 at(std::size_t n) const { return {x_[n], y_[n], z_[n]}; }

 private:
  Grid3D grid_;
  std::vector<double> x_, y_, z_;
};

/// Central differences inside; periodic wrap or one-sided second-order stencils at
/// dirichlet_zero boundaries.
VectorField3D grad3d(const ScalarField3D& f);

/// Central-difference divergence using the same closure as grad3d; on periodic grids it
/// is the negative adjoint of grad3d.
ScalarField3D div3d(const VectorField3D& F);

/// 7-point Laplacian; periodic wrap or zero ghost values outside dirichlet_zero grids.
ScalarField3D laplacian3d(const ScalarField3D& f);

/// sqrt(|grad f|^2 + eta^2) nodewise.
ScalarField3D regularized_grad_norm(const ScalarField3D& f, double eta);

/// Discrete L2 inner product (sum times cell volume).
double inner(const ScalarField3D& a, const ScalarField3D& b);
double inner(const VectorField3D& a, const VectorField3D& b);

/// Eigenvalue of -Laplacian (7-point) for Fourier index m on an axis with n nodes.
double discrete_laplacian_symbol(int m, int n, double h);

void require_same_grid(const Grid3D& a, const Grid3D& b, const char* what);

}  // namespace geoflow::core
