#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geoflow/core/sparse.hpp"
#include "geoflow/simd/kernels.hpp"
#include "geoflow/solvation/solvation.hpp"

namespace geoflow::solvation {
namespace {

bool on_boundary(const Grid3D& g, int i, int j, int k) {
  return i == 0 || j == 0 || k == 0 || i == g.dims[0] - 1 || j == g.dims[1] - 1 || k == g.dims[2] - 1;
}

/// -div(eps grad .) + diag(shift) on interior rows, arithmetic-mean face coefficients.
/// Outer rows produce zero.
class FluxOperator {
 public:
  FluxOperator(const ScalarField3D& eps) : g_(eps.grid()) {
    const std::size_t n = g_.size();
    ex_.assign(n, 0.0);
    ey_.assign(n, 0.0);
    ez_.assign(n, 0.0);
    const std::size_t sy = g_.dims[0], sz = static_cast<std::size_t>(g_.dims[0]) * g_.dims[1];
    const double ix = 1.0 / (g_.spacing[0] * g_.spacing[0]);
    const double iy = 1.0 / (g_.spacing[1] * g_.spacing[1]);
    const double iz = 1.0 / (g_.spacing[2] * g_.spacing[2]);
    for (int k = 0; k < g_.dims[2]; ++k)
      for (int j = 0; j < g_.dims[1]; ++j)
        for (int i = 0; i < g_.dims[0]; ++i) {
          const std::size_t c = g_.index(i, j, k);
          if (i + 1 < g_.dims[0]) ex_[c] = 0.5 * (eps[c] + eps[c + 1]) * ix;
          if (j + 1 < g_.dims[1]) ey_[c] = 0.5 * (eps[c] + eps[c + sy]) * iy;
          if (k + 1 < g_.dims[2]) ez_[c] = 0.5 * (eps[c] + eps[c + sz]) * iz;
        }
    diag_.assign(n, 0.0);
    for (int k = 1; k + 1 < g_.dims[2]; ++k)
      for (int j = 1; j + 1 < g_.dims[1]; ++j)
        for (int i = 1; i + 1 < g_.dims[0]; ++i) {
          const std::size_t c = g_.index(i, j, k);
          diag_[c] = ex_[c] + ex_[c - 1] + ey_[c] + ey_[c - sy] + ez_[c] + ez_[c - sz];
        }
  }

  void apply(const double* x, double* y, const double* shift) const {
    const auto& kt = simd::active();
    const std::size_t nx = g_.dims[0], sy = nx, sz = nx * g_.dims[1];
    std::fill(y, y + g_.size(), 0.0);
    for (int k = 1; k + 1 < g_.dims[2]; ++k)
      for (int j = 1; j + 1 < g_.dims[1]; ++j) {
        const std::size_t b = g_.index(0, j, k);
        simd::VarCoefLine line{y + b,          x + b,          x + b - sy,         x + b + sy,
                               x + b - sz,     x + b + sz,     ex_.data() + b,     ey_.data() + b - sy,
                               ey_.data() + b, ez_.data() + b - sz, ez_.data() + b, shift ? shift + b : nullptr};
        kt.varcoef7(line, 1, nx - 1);
      }
  }

  const std::vector<double>& diag() const { return diag_; }

 private:
  const Grid3D& g_;
  std::vector<double> ex_, ey_, ez_, diag_;
};

struct Boltzmann {
  const SolvationParams& p;
  const ScalarField3D& S;
  const ScalarField3D& rho;
  double lambda;

  // Source lambda [S rho + (1 - S) sum c q e^{-q phi}] and its phi-derivative (negated).
  void eval(std::size_t n, double phi, double& source, double& slope) const {
    double ion = 0.0, d = 0.0;
    for (const auto& s : p.ions) {
      const double arg = -s.charge * phi;
      const double c = std::clamp(arg, -p.boltzmann_clamp, p.boltzmann_clamp);
      const double e = std::exp(c);
      ion += s.concentration * s.charge * e;
      if (c == arg) d += s.concentration * s.charge * s.charge * e;
    }
    source = lambda * (S[n] * rho[n] + (1.0 - S[n]) * ion);
    slope = lambda * (1.0 - S[n]) * d;
  }
};

double residual(const FluxOperator& A, const Boltzmann& src, const Grid3D& g, const std::vector<double>& phi,
                std::vector<double>& F, std::vector<double>* slope) {
  A.apply(phi.data(), F.data(), nullptr);
  if (slope) std::fill(slope->begin(), slope->end(), 0.0);
  double s2 = 0.0;
  for (int k = 1; k + 1 < g.dims[2]; ++k)
    for (int j = 1; j + 1 < g.dims[1]; ++j)
      for (int i = 1; i + 1 < g.dims[0]; ++i) {
        const std::size_t n = g.index(i, j, k);
        double s, d;
        src.eval(n, phi[n], s, d);
        F[n] -= s;
        if (slope) (*slope)[n] = d;
        s2 += F[n] * F[n];
      }
  return std::sqrt(s2);
}

}  // namespace

ScalarField3D boundary_potential(std::span<const Atom> atoms, const Grid3D& grid, const SolvationParams& p,
                                 double eps, double kappa, FarField far) {
  ScalarField3D phi(grid);
  if (far == FarField::zero) return phi;
  const double scale = p.coulomb / (p.kT * eps);
  for (int k = 0; k < grid.dims[2]; ++k)
    for (int j = 0; j < grid.dims[1]; ++j)
      for (int i = 0; i < grid.dims[0]; ++i) {
        if (!on_boundary(grid, i, j, k)) continue;
        const Vec3 x = grid.position(i, j, k);
        double v = 0.0;
        for (const auto& a : atoms) {
          const double dx = x[0] - a.position[0], dy = x[1] - a.position[1], dz = x[2] - a.position[2];
          const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
          v += scale * a.charge * std::exp(-kappa * r) / r;
        }
        phi.at(i, j, k) = v;
      }
  return phi;
}

GpbeResult solve_gpbe(const ScalarField3D& S, const ScalarField3D& rho, const SolvationParams& p,
                      const ScalarField3D& phi_init, const GpbeOptions& opt) {
  p.validate();
  core::require_same_grid(S.grid(), rho.grid(), "solve_gpbe: rho");
  core::require_same_grid(S.grid(), phi_init.grid(), "solve_gpbe: phi_init");
  const Grid3D& g = S.grid();
  if (g.boundary != core::Boundary::dirichlet_zero) throw std::invalid_argument("solve_gpbe needs a Dirichlet grid");
  const ScalarField3D eps = dielectric_of_S(S, p.eps_m, p.eps_s);
  const FluxOperator A(eps);
  const Boltzmann src{p, S, rho, p.lambda()};
  const std::size_t n = g.size();
  const auto& kt = simd::active();

  std::vector<double> phi(phi_init.values().begin(), phi_init.values().end());
  std::vector<double> F(n), Ft(n), slope(n), trial(n), delta(n), minusF(n), inv_diag(n), shift(n);

  // Scale for the relative residual: the residual of the zero interior guess.
  std::vector<double> zero = phi;
  for (int k = 1; k + 1 < g.dims[2]; ++k)
    for (int j = 1; j + 1 < g.dims[1]; ++j)
      for (int i = 1; i + 1 < g.dims[0]; ++i) zero[g.index(i, j, k)] = 0.0;
  const double ref = residual(A, src, g, zero, F, nullptr);

  GpbeResult out{ScalarField3D(g, phi), {}, 0, 0, false};
  if (ref == 0.0) {
    out.phi = ScalarField3D(g, zero);
    out.residual_history.push_back(0.0);
    out.converged = true;
    return out;
  }

  double fnorm = residual(A, src, g, phi, F, &slope);
  for (int it = 0;; ++it) {
    const double rel = fnorm / ref;
    out.residual_history.push_back(rel);
    out.iterations = it;
    if (rel <= opt.tol) {
      out.converged = true;
      break;
    }
    if (it >= opt.max_iter) break;
    for (std::size_t c = 0; c < n; ++c) {
      minusF[c] = -F[c];
      shift[c] = slope[c];
      inv_diag[c] = A.diag()[c] > 0.0 ? 1.0 / (A.diag()[c] + slope[c]) : 0.0;
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    const auto pr = core::pcg(
        [&](std::span<const double> x, std::span<double> y) { A.apply(x.data(), y.data(), shift.data()); },
        inv_diag, minusF, delta, opt.pcg_tol, opt.pcg_max_iter);
    out.pcg_iterations += pr.iterations;

    double alpha = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half, alpha *= 0.5) {
      trial = phi;
      kt.axpy(alpha, delta.data(), trial.data(), n);
      const double ft = residual(A, src, g, trial, Ft, &shift);
      if (ft <= fnorm) {
        phi.swap(trial);
        F.swap(Ft);
        slope.swap(shift);
        fnorm = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.phi = ScalarField3D(g, std::move(phi));
  return out;
}

}  // namespace geoflow::solvation
