#pragma once

// Data-parallel inner loops shared by the grid and mesh solvers. Every kernel
// has a portable scalar reference and, where the build supports it, an AVX2
// variant. The variant is chosen once at startup from the CPU features and can
// be pinned with GEOFLOW_SIMD=scalar|avx2.

#include <cstddef>
#include <string_view>

namespace geoflow::simd {

/// One x-line of the constant-coefficient 7-point Laplacian:
///   out[i] = wx (c[i-1] + c[i+1]) + wy (ym[i] + yp[i]) + wz (zm[i] + zp[i])
///            - 2 (wx + wy + wz) c[i]
/// The caller supplies neighbour lines already shifted for the boundary rule.
struct Stencil7Line {
  double* out;
  const double* c;
  const double* ym;
  const double* yp;
  const double* zm;
  const double* zp;
  double wx, wy, wz;
};

/// One x-line of a symmetric variable-coefficient operator in flux form:
///   out[i] = kx[i-1](c[i]-c[i-1]) + kx[i](c[i]-c[i+1])
///          + kym[i](c[i]-ym[i]) + kyp[i](c[i]-yp[i])
///          + kzm[i](c[i]-zm[i]) + kzp[i](c[i]-zp[i]) + shift[i] c[i]
/// Face coefficients already carry the 1/h^2 factor. `shift` may be null.
struct VarCoefLine {
  double* out;
  const double* c;
  const double* ym;
  const double* yp;
  const double* zm;
  const double* zp;
  const double* kx;
  const double* kym;
  const double* kyp;
  const double* kzm;
  const double* kzp;
  const double* shift;
};

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y += a x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y = x + a y
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  /// z = x * y (elementwise)
  void (*mul)(const double* x, const double* y, double* z, std::size_t n);
  /// Evaluates i in [begin, end); begin >= 1 and end <= n-1 so c[i±1] is valid.
  void (*stencil7)(const Stencil7Line& line, std::size_t begin, std::size_t end);
  /// Same index contract as stencil7.
  void (*varcoef7)(const VarCoefLine& line, std::size_t begin, std::size_t end);
};

const KernelTable& scalar_kernels();

/// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// The table used by the library: AVX2 when available unless GEOFLOW_SIMD=scalar.
const KernelTable& active();

}  // namespace geoflow::simd
