#include <stdexcept>

#include "geoflow/patterns/patterns.hpp"

namespace geoflow::patterns {

double spontaneous_geodesic_curvature(const HybridLipidParams& p) {
  if (!(p.V1 > 0.0 && p.V2 > 0.0 && p.w1 > 0.0 && p.w2 > 0.0)) {
    throw std::invalid_argument("hybrid lipid volumes and spacings must be positive");
  }
  if (p.B < 0.0) throw std::invalid_argument("hybrid lipid B must be non-negative");
  const double wT = p.wT(), VT = p.VT();
  const double d = 1.0 + 2.0 * p.B;
  return ((1.0 - 2.0 * p.B) * p.wd() / (d * wT) + 2.0 * p.B * p.Vd() / (d * VT)) / wT;
}

double hybrid_interface_energy(double L1, double L2, const HybridLipidParams& p) {
  if (!(L1 > 0.0 && L2 > 0.0)) throw std::invalid_argument("chain lengths must be positive");
  const double a = L1 - p.L1_0(), b = L2 - p.L2_0(), c = L1 - L2;
  return p.k_s * a * a + p.k_u * b * b + p.gamma_hyb * c * c;
}

}  // namespace geoflow::patterns
