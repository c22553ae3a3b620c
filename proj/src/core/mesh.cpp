#include "geoflow/core/mesh.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace geoflow::core {
namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot3(a, a)); }
Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

}  // namespace

SurfaceMesh SurfaceMesh::build(std::vector<Vec3> vertices, std::vector<Triangle> triangles, bool require_closed) {
  const int nv = static_cast<int>(vertices.size());
  if (triangles.empty() || (require_closed && (nv < 4 || triangles.size() < 4))) {
    throw std::invalid_argument("mesh too small to be closed");
  }
  for (const auto& v : vertices) {
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
      throw std::invalid_argument("mesh vertex is not finite");
    }
  }

  // Every directed edge once and its twin present: closed and consistently oriented.
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      if (a < 0 || a >= nv || b < 0 || b >= nv || a == b) {
        throw std::invalid_argument("triangle " + std::to_string(t) + " has an invalid vertex index");
      }
      if (!directed.emplace(std::make_pair(a, b), static_cast<int>(t)).second) {
        throw std::invalid_argument("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                    ") is used twice with the same orientation");
      }
    }
  }
  std::size_t boundary_edges = 0;
  for (const auto& [e, t] : directed) {
    if (!directed.count({e.second, e.first})) {
      if (!require_closed) {
        ++boundary_edges;
        continue;
      }
      throw std::invalid_argument("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                                  ") is not shared by exactly two triangles");
    }
  }

  SurfaceMesh m;
  m.edge_count_ = (directed.size() - boundary_edges) / 2 + boundary_edges;
  std::vector<double> tri_area(triangles.size());
  double area_sum = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    tri_area[t] = 0.5 * norm(cross(sub(vertices[tri[1]], vertices[tri[0]]), sub(vertices[tri[2]], vertices[tri[0]])));
    area_sum += tri_area[t];
  }
  const double mean_area = area_sum / static_cast<double>(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    if (!(tri_area[t] > 1e-12 * mean_area)) {
      throw std::invalid_argument("degenerate triangle " + std::to_string(t));
    }
  }

  m.areas_.assign(nv, 0.0);
  std::vector<Triplet> trip;
  trip.reserve(triangles.size() * 12);
  double edge_len = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int c = 0; c < 3; ++c) {
      m.areas_[tri[c]] += tri_area[t] / 3.0;
      // Angle at corner c is opposite the edge (c+1, c+2).
      const int i = tri[(c + 1) % 3], j = tri[(c + 2) % 3];
      const Vec3 u = sub(vertices[i], vertices[tri[c]]);
      const Vec3 v = sub(vertices[j], vertices[tri[c]]);
      const double cot = dot3(u, v) / norm(cross(u, v));
      const double w = 0.5 * cot;
      trip.push_back({i, j, w});
      trip.push_back({j, i, w});
      trip.push_back({i, i, -w});
      trip.push_back({j, j, -w});
      edge_len += norm(sub(vertices[i], vertices[j]));
    }
  }
  m.weak_ = csr_from_triplets(nv, std::move(trip));
  for (int i = 0; i < nv; ++i) {
    if (!(m.areas_[i] > 0.0)) throw std::invalid_argument("vertex " + std::to_string(i) + " has no area");
    double row = 0.0;
    for (int p = m.weak_.row_ptr[i]; p < m.weak_.row_ptr[i + 1]; ++p) row += std::abs(m.weak_.val[p]);
    m.spectral_bound_ = std::max(m.spectral_bound_, row / m.areas_[i]);
  }
  for (double a : m.areas_) m.total_area_ += a;
  m.mean_edge_ = edge_len / (3.0 * static_cast<double>(triangles.size()));
  m.vertices_ = std::move(vertices);
  m.triangles_ = std::move(triangles);
  return m;
}

namespace {

struct Icosahedron {
  std::vector<Vec3> v;
  std::vector<Triangle> f;
};

Icosahedron icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosahedron ico;
  ico.v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : ico.v) p = normalized(p);
  ico.f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
           {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
           {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return ico;
}

}  // namespace

SurfaceMesh make_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 7) throw std::invalid_argument("icosphere subdivisions must be in [0, 7]");
  auto [verts, faces] = icosahedron();
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const Vec3& p = verts[a];
      const Vec3& q = verts[b];
      verts.push_back(normalized({0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])}));
      const int id = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  return SurfaceMesh::build(std::move(verts), std::move(faces));
}

SurfaceMesh make_geodesic_sphere(int frequency) {
  if (frequency < 1 || frequency > 128) throw std::invalid_argument("geodesic frequency must be in [1, 128]");
  const auto ico = icosahedron();
  const int f = frequency;
  std::vector<Vec3> verts = ico.v;
  std::vector<Triangle> faces;
  // Points strictly inside an icosahedron edge are keyed by (min corner, max corner, steps from min).
  std::map<std::tuple<int, int, int>, int> edge_points;
  for (const auto& tri : ico.f) {
    const int A = tri[0], B = tri[1], C = tri[2];
    // Lattice point (i, j): i steps towards B, j steps towards C.
    auto point = [&](int i, int j) -> int {
      const int a = f - i - j;
      if (i == 0 && j == 0) return A;
      if (i == f) return B;
      if (j == f) return C;
      auto on_edge = [&](int p, int q, int steps_from_p) {
        const auto key = p < q ? std::make_tuple(p, q, steps_from_p) : std::make_tuple(q, p, f - steps_from_p);
        auto it = edge_points.find(key);
        if (it != edge_points.end()) return it->second;
        const auto [lo, hi, s] = key;
        const Vec3& x = ico.v[lo];
        const Vec3& y = ico.v[hi];
        const double w = static_cast<double>(s) / f;
        verts.push_back(normalized({(1 - w) * x[0] + w * y[0], (1 - w) * x[1] + w * y[1], (1 - w) * x[2] + w * y[2]}));
        const int id = static_cast<int>(verts.size()) - 1;
        edge_points.emplace(key, id);
        return id;
      };
      if (j == 0) return on_edge(A, B, i);
      if (i == 0) return on_edge(A, C, j);
      if (a == 0) return on_edge(B, C, j);
      const Vec3& pa = ico.v[A];
      const Vec3& pb = ico.v[B];
      const Vec3& pc = ico.v[C];
      verts.push_back(normalized({(a * pa[0] + i * pb[0] + j * pc[0]) / f, (a * pa[1] + i * pb[1] + j * pc[1]) / f,
                                  (a * pa[2] + i * pb[2] + j * pc[2]) / f}));
      return static_cast<int>(verts.size()) - 1;
    };
    std::vector<std::vector<int>> idx(f + 1);
    for (int i = 0; i <= f; ++i) {
      idx[i].resize(f + 1 - i);
      for (int j = 0; j <= f - i; ++j) idx[i][j] = point(i, j);
    }
    for (int i = 0; i < f; ++i) {
      for (int j = 0; j < f - i; ++j) {
        faces.push_back({idx[i][j], idx[i + 1][j], idx[i][j + 1]});
        if (j + 1 < f - i) faces.push_back({idx[i + 1][j], idx[i + 1][j + 1], idx[i][j + 1]});
      }
    }
  }
  return SurfaceMesh::build(std::move(verts), std::move(faces));
}

void require_field_on(const SurfaceMesh& mesh, std::span<const double> u, const char* what) {
  if (u.size() != mesh.vertex_count()) {
    throw std::invalid_argument(std::string(what) + ": field length " + std::to_string(u.size()) +
                                " does not match vertex count " + std::to_string(mesh.vertex_count()));
  }
}

SurfaceField weak_laplacian_apply(const SurfaceMesh& mesh, std::span<const double> u) {
  require_field_on(mesh, u, "weak_laplacian_apply");
  SurfaceField out(u.size());
  mesh.weak_laplacian().apply(u, out);
  return out;
}

SurfaceField laplace_beltrami_apply(const SurfaceMesh& mesh, std::span<const double> u) {
  SurfaceField out = weak_laplacian_apply(mesh, u);
  const auto a = mesh.vertex_areas();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= a[i];
  return out;
}

double surface_integral(const SurfaceMesh& mesh, std::span<const double> u) {
  require_field_on(mesh, u, "surface_integral");
  return simd::active().dot(mesh.vertex_areas().data(), u.data(), u.size());
}

double surface_mean(const SurfaceMesh& mesh, std::span<const double> u) {
  return surface_integral(mesh, u) / mesh.total_area();
}

}  // namespace geoflow::core
