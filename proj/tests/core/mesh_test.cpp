#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "geoflow/core/isosurface.hpp"
#include "geoflow/core/mesh.hpp"
#include "geoflow/core/sparse.hpp"

using namespace geoflow::core;

namespace {

long euler(const SurfaceMesh& m) {
  return static_cast<long>(m.vertex_count()) - static_cast<long>(m.edge_count()) +
         static_cast<long>(m.triangle_count());
}

std::vector<double> coordinate(const SurfaceMesh& m, int axis) {
  std::vector<double> z(m.vertex_count());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = m.vertices()[i][axis];
  return z;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("icosahedron and its subdivisions") {
  const SurfaceMesh ico = make_icosphere(0);
  CHECK(ico.vertex_count() == 12);
  CHECK(ico.triangle_count() == 20);
  CHECK(ico.edge_count() == 30);
  for (int n = 1; n <= 4; ++n) {
    const SurfaceMesh m = make_icosphere(n);
    CHECK(m.vertex_count() == 10u * (1u << (2 * n)) + 2u);
    CHECK(euler(m) == 2);
  }
  CHECK(make_geodesic_sphere(10).vertex_count() == 1002);
  CHECK(make_geodesic_sphere(19).vertex_count() == 3612);
  CHECK_THROWS_AS(make_icosphere(8), std::invalid_argument);
}

TEST_CASE("icosphere area converges to 4 pi") {
  const double exact = 4.0 * std::numbers::pi;
  double prev = 1.0;
  for (int n = 2; n <= 4; ++n) {
    const double err = std::abs(make_icosphere(n).total_area() - exact) / exact;
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("cotangent Laplacian is symmetric with zero row sums") {
  const SurfaceMesh m = make_icosphere(2);
  const CsrMatrix& L = m.weak_laplacian();
  for (int r = 0; r < L.rows; r += 7) {
    double sum = 0.0;
    for (int p = L.row_ptr[r]; p < L.row_ptr[r + 1]; ++p) {
      sum += L.val[p];
      CHECK(L.at(L.col[p], r) == doctest::Approx(L.val[p]).epsilon(1e-12));
    }
    CHECK(std::abs(sum) < 1e-12);
  }
  double area = 0.0;
  for (double a : m.vertex_areas()) area += a;
  CHECK(area == doctest::Approx(m.total_area()).epsilon(1e-12));
}

TEST_CASE("coordinate functions are l = 1 eigenfields") {
  const SurfaceMesh m = make_icosphere(4);
  for (int axis = 0; axis < 3; ++axis) {
    const auto z = coordinate(m, axis);
    const auto lz = laplace_beltrami_apply(m, z);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double e = lz[i] + 2.0 * z[i];
      num += m.vertex_areas()[i] * e * e;
      den += m.vertex_areas()[i] * 4.0 * z[i] * z[i];
    }
    CHECK(std::sqrt(num / den) < 0.03);
  }
  CHECK(m.laplacian_spectral_bound() >= 2.0);
  CHECK(std::abs(surface_mean(m, coordinate(m, 2))) < 1e-12);
}

TEST_CASE("mesh validation") {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Triangle> closed{{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  CHECK(euler(SurfaceMesh::build(v, closed)) == 2);
  std::vector<Triangle> open{{0, 2, 1}, {0, 1, 3}, {1, 2, 3}};
  CHECK_THROWS_AS(SurfaceMesh::build(v, open), std::invalid_argument);
  CHECK_NOTHROW(SurfaceMesh::build(v, open, false));
  std::vector<Triangle> flipped{{0, 1, 2}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  CHECK_THROWS_AS(SurfaceMesh::build(v, flipped), std::invalid_argument);
  std::vector<Triangle> bad_index{{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 7}};
  CHECK_THROWS_AS(SurfaceMesh::build(v, bad_index), std::invalid_argument);
}

TEST_CASE("builtin molecular surfaces are closed spheres topologically") {
  const SurfaceMesh three = make_three_atom_surface(0.15);
  CHECK(euler(three) == 2);
  // Union of three unit spheres: less than three full spheres, more than one.
  CHECK(three.total_area() > 4.0 * std::numbers::pi);
  CHECK(three.total_area() < 12.0 * std::numbers::pi);
  const Vec3 c{0.0, 0.0, 0.0};
  const SurfaceMesh one = mesh_sphere_union(std::span<const Vec3>(&c, 1), 1.0, 0.1);
  CHECK(one.total_area() == doctest::Approx(4.0 * std::numbers::pi).epsilon(0.01));
  CHECK_THROWS_AS(builtin_mesh("dodecahedron"), std::invalid_argument);
}

}  // TEST_SUITE
