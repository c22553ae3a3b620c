#include "geoflow/core/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "geoflow/simd/kernels.hpp"

namespace geoflow::core {

Grid3D Grid3D::make(Vec3 origin, Vec3 spacing, Index3 dims, Boundary boundary) {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 4) throw std::invalid_argument("grid needs at least 4 nodes per axis");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) {
      throw std::invalid_argument("grid spacing must be positive");
    }
  }
  return Grid3D{origin, spacing, dims, boundary};
}

Grid3D Grid3D::cube(double lo, double hi, int n, Boundary boundary) {
  if (!(hi > lo)) throw std::invalid_argument("grid extent must be positive");
  if (n < 4) throw std::invalid_argument("grid needs at least 4 nodes per axis");
  const double h = boundary == Boundary::periodic ? (hi - lo) / n : (hi - lo) / (n - 1);
  return make({lo, lo, lo}, {h, h, h}, {n, n, n}, boundary);
}

ScalarField3D::ScalarField3D(const Grid3D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField3D::ScalarField3D(const Grid3D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field value count " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
}

ScalarField3D ScalarField3D::sample(const Grid3D& grid, const std::function<double(const Vec3&)>& f) {
  ScalarField3D out(grid);
  for (int k = 0; k < grid.dims[2]; ++k)
    for (int j = 0; j < grid.dims[1]; ++j)
      for (int i = 0; i < grid.dims[0]; ++i) out.at(i, j, k) = f(grid.position(i, j, k));
  return out;
}

double ScalarField3D::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

double ScalarField3D::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField3D::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

VectorField3D::VectorField3D(const Grid3D& grid)
    : grid_(grid), x_(grid.size(), 0.0), y_(grid.size(), 0.0), z_(grid.size(), 0.0) {}

void require_same_grid(const Grid3D& a, const Grid3D& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string("mismatched grids in ") + what);
}

namespace {

std::size_t stride(const Grid3D& g, int axis) {
  return axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(g.dims[0])
                                   : static_cast<std::size_t>(g.dims[0]) * g.dims[1];
}

// Central derivative along `axis` of a nodal array, with the grid's boundary closure.
void central_derivative(const Grid3D& g, const double* f, double* out, int axis) {
  const int n = g.dims[axis];
  const std::size_t s = stride(g, axis);
  const double inv2h = 0.5 / g.spacing[axis];
  const bool periodic = g.boundary == Boundary::periodic;
  for (int k = 0; k < g.dims[2]; ++k) {
    for (int j = 0; j < g.dims[1]; ++j) {
      for (int i = 0; i < g.dims[0]; ++i) {
        const Index3 ijk{i, j, k};
        const int p = ijk[axis];
        const std::size_t c = g.index(i, j, k);
        const std::size_t base = c - static_cast<std::size_t>(p) * s;
        if (p > 0 && p < n - 1) {
          out[c] = (f[c + s] - f[c - s]) * inv2h;
        } else if (periodic) {
          const std::size_t up = base + static_cast<std::size_t>((p + 1) % n) * s;
          const std::size_t dn = base + static_cast<std::size_t>((p + n - 1) % n) * s;
          out[c] = (f[up] - f[dn]) * inv2h;
        } else if (p == 0) {
          out[c] = (-3.0 * f[c] + 4.0 * f[c + s] - f[c + 2 * s]) * inv2h;
        } else {
          out[c] = (3.0 * f[c] - 4.0 * f[c - s] + f[c - 2 * s]) * inv2h;
        }
      }
    }
  }
}

}  // namespace

VectorField3D grad3d(const ScalarField3D& f) {
  const Grid3D& g = f.grid();
  Grid3D::make(g.origin, g.spacing, g.dims, g.boundary);
  VectorField3D out(g);
  for (int a = 0; a < 3; ++a) central_derivative(g, f.data(), out.component(a).data(), a);
  return out;
}

ScalarField3D div3d(const VectorField3D& F) {
  const Grid3D& g = F.grid();
  Grid3D::make(g.origin, g.spacing, g.dims, g.boundary);
  ScalarField3D out(g);
  std::vector<double> tmp(g.size());
  for (int a = 0; a < 3; ++a) {
    central_derivative(g, F.component(a).data(), tmp.data(), a);
    for (std::size_t n = 0; n < tmp.size(); ++n) out[n] += tmp[n];
  }
  return out;
}

ScalarField3D laplacian3d(const ScalarField3D& f) {
  const Grid3D& g = f.grid();
  Grid3D::make(g.origin, g.spacing, g.dims, g.boundary);
  ScalarField3D out(g);
  const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
  const bool periodic = g.boundary == Boundary::periodic;
  const std::vector<double> zero_line(static_cast<std::size_t>(nx), 0.0);
  const double wx = 1.0 / (g.spacing[0] * g.spacing[0]);
  const double wy = 1.0 / (g.spacing[1] * g.spacing[1]);
  const double wz = 1.0 / (g.spacing[2] * g.spacing[2]);
  const auto& kern = simd::active();
  const double* v = f.data();
  auto line = [&](int j, int k) -> const double* {
    if (periodic) return v + g.index(0, (j + ny) % ny, (k + nz) % nz);
    if (j < 0 || j >= ny || k < 0 || k >= nz) return zero_line.data();
    return v + g.index(0, j, k);
  };
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      simd::Stencil7Line l{out.data() + g.index(0, j, k), line(j, k), line(j - 1, k), line(j + 1, k),
                           line(j, k - 1), line(j, k + 1), wx, wy, wz};
      kern.stencil7(l, 1, static_cast<std::size_t>(nx - 1));
      const double diag = -2.0 * (wx + wy + wz);
      for (int i : {0, nx - 1}) {
        const double left = i > 0 ? l.c[i - 1] : (periodic ? l.c[nx - 1] : 0.0);
        const double right = i < nx - 1 ? l.c[i + 1] : (periodic ? l.c[0] : 0.0);
        l.out[i] = wx * (left + right) + wy * (l.ym[i] + l.yp[i]) + wz * (l.zm[i] + l.zp[i]) + diag * l.c[i];
      }
    }
  }
  return out;
}

ScalarField3D regularized_grad_norm(const ScalarField3D& f, double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("regularization eta must be non-negative");
  const VectorField3D g = grad3d(f);
  ScalarField3D out(f.grid());
  const auto& gx = g.component(0);
  const auto& gy = g.component(1);
  const auto& gz = g.component(2);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::sqrt(gx[n] * gx[n] + gy[n] * gy[n] + gz[n] * gz[n] + eta * eta);
  }
  return out;
}

double inner(const ScalarField3D& a, const ScalarField3D& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  return simd::active().dot(a.data(), b.data(), a.size()) * a.grid().cell_volume();
}

double inner(const VectorField3D& a, const VectorField3D& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += simd::active().dot(a.component(c).data(), b.component(c).data(), a.size());
  return s * a.grid().cell_volume();
}

double discrete_laplacian_symbol(int m, int n, double h) {
  const double s = std::sin(std::numbers::pi * m / n);
  return 4.0 * s * s / (h * h);
}

}  // namespace geoflow::core
