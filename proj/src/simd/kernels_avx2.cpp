// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.
// The elementwise kernels keep the scalar operation order (no FMA) so they
// match the reference bit for bit; dot uses four partial sums.

#include <immintrin.h>

#include "geoflow/simd/kernels.hpp"

namespace geoflow::simd {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_mul_pd(va, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

void mul(const double* x, const double* y, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void stencil7(const Stencil7Line& l, std::size_t begin, std::size_t end) {
  const double diag = -2.0 * (l.wx + l.wy + l.wz);
  const __m256d wx = _mm256_set1_pd(l.wx);
  const __m256d wy = _mm256_set1_pd(l.wy);
  const __m256d wz = _mm256_set1_pd(l.wz);
  const __m256d vd = _mm256_set1_pd(diag);
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d sx = _mm256_add_pd(_mm256_loadu_pd(l.c + i - 1), _mm256_loadu_pd(l.c + i + 1));
    const __m256d sy = _mm256_add_pd(_mm256_loadu_pd(l.ym + i), _mm256_loadu_pd(l.yp + i));
    const __m256d sz = _mm256_add_pd(_mm256_loadu_pd(l.zm + i), _mm256_loadu_pd(l.zp + i));
    __m256d v = _mm256_mul_pd(wx, sx);
    v = _mm256_add_pd(v, _mm256_mul_pd(wy, sy));
    v = _mm256_add_pd(v, _mm256_mul_pd(wz, sz));
    v = _mm256_add_pd(v, _mm256_mul_pd(vd, _mm256_loadu_pd(l.c + i)));
    _mm256_storeu_pd(l.out + i, v);
  }
  for (; i < end; ++i) {
    l.out[i] = l.wx * (l.c[i - 1] + l.c[i + 1]) + l.wy * (l.ym[i] + l.yp[i]) +
               l.wz * (l.zm[i] + l.zp[i]) + diag * l.c[i];
  }
}

void varcoef7(const VarCoefLine& l, std::size_t begin, std::size_t end) {
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d ci = _mm256_loadu_pd(l.c + i);
    auto term = [&](const double* k, const double* nb) {
      return _mm256_mul_pd(_mm256_loadu_pd(k), _mm256_sub_pd(ci, _mm256_loadu_pd(nb)));
    };
    __m256d v = term(l.kx + i - 1, l.c + i - 1);
    v = _mm256_add_pd(v, term(l.kx + i, l.c + i + 1));
    v = _mm256_add_pd(v, term(l.kym + i, l.ym + i));
    v = _mm256_add_pd(v, term(l.kyp + i, l.yp + i));
    v = _mm256_add_pd(v, term(l.kzm + i, l.zm + i));
    v = _mm256_add_pd(v, term(l.kzp + i, l.zp + i));
    if (l.shift) v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(l.shift + i), ci));
    _mm256_storeu_pd(l.out + i, v);
  }
  for (; i < end; ++i) {
    const double ci = l.c[i];
    double v = l.kx[i - 1] * (ci - l.c[i - 1]) + l.kx[i] * (ci - l.c[i + 1]) +
               l.kym[i] * (ci - l.ym[i]) + l.kyp[i] * (ci - l.yp[i]) +
               l.kzm[i] * (ci - l.zm[i]) + l.kzp[i] * (ci - l.zp[i]);
    if (l.shift) v += l.shift[i] * ci;
    l.out[i] = v;
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", dot, axpy, xpay, mul, stencil7, varcoef7};
  return table;
}

}  // namespace geoflow::simd
