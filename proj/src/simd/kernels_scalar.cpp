#include "geoflow/simd/kernels.hpp"

namespace geoflow::simd {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

void mul(const double* x, const double* y, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void stencil7(const Stencil7Line& l, std::size_t begin, std::size_t end) {
  const double diag = -2.0 * (l.wx + l.wy + l.wz);
  for (std::size_t i = begin; i < end; ++i) {
    l.out[i] = l.wx * (l.c[i - 1] + l.c[i + 1]) + l.wy * (l.ym[i] + l.yp[i]) +
               l.wz * (l.zm[i] + l.zp[i]) + diag * l.c[i];
  }
}

void varcoef7(const VarCoefLine& l, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    const double ci = l.c[i];
    double v = l.kx[i - 1] * (ci - l.c[i - 1]) + l.kx[i] * (ci - l.c[i + 1]) +
               l.kym[i] * (ci - l.ym[i]) + l.kyp[i] * (ci - l.yp[i]) +
               l.kzm[i] * (ci - l.zm[i]) + l.kzp[i] * (ci - l.zp[i]);
    if (l.shift) v += l.shift[i] * ci;
    l.out[i] = v;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", dot, axpy, xpay, mul, stencil7, varcoef7};
  return table;
}

}  // namespace geoflow::simd
