#include <cmath>
#include <stdexcept>

#include "geoflow/solvation/solvation.hpp"

namespace geoflow::solvation {

double born_energy(double charge, double radius, double eps_m, double eps_s, double coulomb) {
  if (!(radius > 0.0) || !(eps_m > 0.0) || !(eps_s > 0.0)) throw std::invalid_argument("born_energy: bad inputs");
  return -coulomb * charge * charge / (2.0 * radius) * (1.0 / eps_m - 1.0 / eps_s);
}

ScalarField3D dielectric_sphere_surface(const Grid3D& grid, const Vec3& center, double radius, double width,
                                        double eps_m, double eps_s) {
  if (!(width > 0.0) || !(radius > 0.0)) throw std::invalid_argument("dielectric_sphere_surface: bad inputs");
  if (!(eps_s > eps_m)) throw std::invalid_argument("dielectric_sphere_surface: needs eps_s > eps_m");
  return ScalarField3D::sample(grid, [&](const Vec3& x) {
    const double dx = x[0] - center[0], dy = x[1] - center[1], dz = x[2] - center[2];
    const double H = 0.5 * (1.0 + std::tanh((radius - std::sqrt(dx * dx + dy * dy + dz * dz)) / width));
    const double inv = 1.0 / eps_s + (1.0 / eps_m - 1.0 / eps_s) * H;
    return (eps_s - 1.0 / inv) / (eps_s - eps_m);
  });
}

}  // namespace geoflow::solvation
