#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "geoflow/simd/kernels.hpp"

namespace geoflow::core {

/// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix {
  int rows = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  void apply(std::span<const double> x, std::span<double> y) const;
  double at(int r, int c) const;
  std::vector<double> diagonal() const;
};

/// Builds a CSR matrix from (row, col, value) triplets, summing duplicates.
struct Triplet {
  int row, col;
  double value;
};
CsrMatrix csr_from_triplets(int rows, std::vector<Triplet> triplets);

struct PcgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for a symmetric positive (semi)definite
/// operator `apply(x, y)` computing y = A x. `x` holds the initial guess and the result.
/// Converged when ||b - A x|| <= rtol ||b||.
template <class Apply>
PcgResult pcg(Apply&& apply, std::span<const double> inv_diag, std::span<const double> b,
              std::span<double> x, double rtol, int max_iter) {
  const auto& k = simd::active();
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  apply(std::span<const double>(x.data(), n), std::span<double>(q));
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double bnorm = std::sqrt(k.dot(b.data(), b.data(), n));
  PcgResult res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  double rnorm = std::sqrt(k.dot(r.data(), r.data(), n));
  res.relative_residual = rnorm / bnorm;
  if (res.relative_residual <= rtol) {
    res.converged = true;
    return res;
  }
  k.mul(inv_diag.data(), r.data(), z.data(), n);
  p = z;
  double rz = k.dot(r.data(), z.data(), n);
  for (int it = 1; it <= max_iter; ++it) {
    apply(std::span<const double>(p), std::span<double>(q));
    const double pq = k.dot(p.data(), q.data(), n);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    k.axpy(alpha, p.data(), x.data(), n);
    k.axpy(-alpha, q.data(), r.data(), n);
    rnorm = std::sqrt(k.dot(r.data(), r.data(), n));
    res.iterations = it;
    res.relative_residual = rnorm / bnorm;
    if (res.relative_residual <= rtol) {
      res.converged = true;
      return res;
    }
    k.mul(inv_diag.data(), r.data(), z.data(), n);
    const double rz_new = k.dot(r.data(), z.data(), n);
    k.xpay(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
  }
  return res;
}

}  // namespace geoflow::core
