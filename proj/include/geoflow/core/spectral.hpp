#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "geoflow/core/grid.hpp"

namespace geoflow::core {

/// Solves (a I - L_h) u = rhs on a periodic grid, where L_h is the 7-point Laplacian,
/// by diagonalising L_h in the discrete Fourier basis. Holds FFTW plans, so reuse one
/// instance for repeated solves on the same grid. Not thread-safe.
class SpectralHelmholtz {
 public:
  explicit SpectralHelmholtz(const Grid3D& grid);
  ~SpectralHelmholtz();
  SpectralHelmholtz(const SpectralHelmholtz&) = delete;
  SpectralHelmholtz& operator=(const SpectralHelmholtz&) = delete;

  /// Throws std::invalid_argument for a < 0, a grid mismatch, or a = 0 with a
  /// right-hand side whose mean exceeds 1e-10 max|rhs|. For a = 0 the result has zero mean.
  ScalarField3D solve(const ScalarField3D& rhs, double a);

  const Grid3D& grid() const { return grid_; }

 private:
  struct Plans;
  Grid3D grid_;
  std::vector<double> symbol_;  // -L_h eigenvalue per half-spectrum entry
  std::unique_ptr<Plans> plans_;
};

ScalarField3D spectral_helmholtz_solve(const ScalarField3D& rhs, double a);

}  // namespace geoflow::core
