#include "geoflow/core/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace geoflow::core {

struct SpectralHelmholtz::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t spec_size = 0;

  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
};

SpectralHelmholtz::SpectralHelmholtz(const Grid3D& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  if (grid.boundary != Boundary::periodic) {
    throw std::invalid_argument("spectral solve requires a periodic grid");
  }
  Grid3D::make(grid.origin, grid.spacing, grid.dims, grid.boundary);
  const int nx = grid.dims[0], ny = grid.dims[1], nz = grid.dims[2];
  const int nxh = nx / 2 + 1;
  plans_->spec_size = static_cast<std::size_t>(nz) * ny * nxh;
  plans_->real = fftw_alloc_real(grid.size());
  plans_->spec = fftw_alloc_complex(plans_->spec_size);
  // FFTW is row-major with the last index fastest; our x-fastest layout maps to (nz, ny, nx).
  plans_->forward = fftw_plan_dft_r2c_3d(nz, ny, nx, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_c2r_3d(nz, ny, nx, plans_->spec, plans_->real, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) throw std::runtime_error("FFTW planning failed");

  std::vector<double> sx(nxh), sy(ny), sz(nz);
  for (int m = 0; m < nxh; ++m) sx[m] = discrete_laplacian_symbol(m, nx, grid.spacing[0]);
  for (int m = 0; m < ny; ++m) sy[m] = discrete_laplacian_symbol(m, ny, grid.spacing[1]);
  for (int m = 0; m < nz; ++m) sz[m] = discrete_laplacian_symbol(m, nz, grid.spacing[2]);
  symbol_.resize(plans_->spec_size);
  std::size_t n = 0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nxh; ++i) symbol_[n++] = sx[i] + sy[j] + sz[k];
}

SpectralHelmholtz::~SpectralHelmholtz() = default;

ScalarField3D SpectralHelmholtz::solve(const ScalarField3D& rhs, double a) {
  require_same_grid(grid_, rhs.grid(), "spectral_helmholtz_solve");
  if (!(a >= 0.0)) throw std::invalid_argument("Helmholtz shift must be non-negative");
  const std::size_t n = grid_.size();
  if (a == 0.0) {
    double mean = 0.0;
    for (double v : rhs.values()) mean += v;
    mean /= static_cast<double>(n);
    if (std::abs(mean) > 1e-10 * rhs.max_abs() && std::abs(mean) > 0.0) {
      throw std::invalid_argument("pure Poisson solve needs a zero-mean right-hand side");
    }
  }
  std::copy(rhs.values().begin(), rhs.values().end(), plans_->real);
  fftw_execute(plans_->forward);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < plans_->spec_size; ++m) {
    const double denom = a + symbol_[m];
    const double f = denom > 0.0 ? scale / denom : 0.0;
    plans_->spec[m][0] *= f;
    plans_->spec[m][1] *= f;
  }
  fftw_execute(plans_->backward);
  return ScalarField3D(grid_, std::vector<double>(plans_->real, plans_->real + n));
}

ScalarField3D spectral_helmholtz_solve(const ScalarField3D& rhs, double a) {
  SpectralHelmholtz solver(rhs.grid());
  return solver.solve(rhs, a);
}

}  // namespace geoflow::core
