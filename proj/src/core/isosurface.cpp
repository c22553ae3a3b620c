#include "geoflow/core/isosurface.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace geoflow::core {
namespace {

constexpr double kBlend = 12.0;  // sharpness of the smooth minimum over spheres

struct BlendedUnion {
  std::span<const Vec3> centers;
  double radius;

  double value(const Vec3& x) const {
    double m = std::numeric_limits<double>::infinity();
    std::vector<double> d(centers.size());
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double dx = x[0] - centers[j][0], dy = x[1] - centers[j][1], dz = x[2] - centers[j][2];
      d[j] = std::sqrt(dx * dx + dy * dy + dz * dz) - radius;
      m = std::min(m, d[j]);
    }
    double s = 0.0;
    for (double dj : d) s += std::exp(-kBlend * (dj - m));
    return m - std::log(s) / kBlend;
  }

  Vec3 gradient(const Vec3& x) const {
    const double e = 1e-6;
    Vec3 g{};
    for (int a = 0; a < 3; ++a) {
      Vec3 p = x, q = x;
      p[a] += e;
      q[a] -= e;
      g[a] = (value(p) - value(q)) / (2 * e);
    }
    return g;
  }

  Vec3 project(Vec3 x) const {
    for (int it = 0; it < 8; ++it) {
      const double f = value(x);
      const Vec3 g = gradient(x);
      const double gg = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
      if (gg < 1e-20) break;
      for (int a = 0; a < 3; ++a) x[a] -= f * g[a] / gg;
      if (std::abs(f) < 1e-12) break;
    }
    return x;
  }
};

double dist2(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

SurfaceMesh mesh_sphere_union(std::span<const Vec3> centers, double radius, double target_edge) {
  if (centers.empty() || !(radius > 0.0) || !(target_edge > 0.0)) {
    throw std::invalid_argument("sphere union needs centers, a positive radius and a positive edge length");
  }
  const BlendedUnion surf{centers, radius};
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const auto& c : centers)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], c[a] - radius - 2 * target_edge);
      hi[a] = std::max(hi[a], c[a] + radius + 2 * target_edge);
    }
  const double h = target_edge;
  Index3 n{};
  for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(std::ceil((hi[a] - lo[a]) / h)) + 1;
  // Offset the lattice by an irrational fraction so no node lands exactly on the surface.
  for (int a = 0; a < 3; ++a) lo[a] -= 0.318309886 * h;
  auto node = [&](int i, int j, int k) { return Vec3{lo[0] + i * h, lo[1] + j * h, lo[2] + k * h}; };
  auto nid = [&](int i, int j, int k) {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
  };
  std::vector<double> f(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) f[nid(i, j, k)] = surf.value(node(i, j, k));

  // One vertex per sign-changing cell, at the mean of its edge crossings.
  std::unordered_map<std::size_t, int> cell_vertex;
  std::vector<Vec3> verts;
  static const int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                                   {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  static const int edges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                   {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  auto cell_id = [&](int i, int j, int k) { return nid(i, j, k); };
  for (int k = 0; k + 1 < n[2]; ++k)
    for (int j = 0; j + 1 < n[1]; ++j)
      for (int i = 0; i + 1 < n[0]; ++i) {
        double v[8];
        bool any_in = false, any_out = false;
        for (int c = 0; c < 8; ++c) {
          v[c] = f[nid(i + corner[c][0], j + corner[c][1], k + corner[c][2])];
          (v[c] < 0 ? any_in : any_out) = true;
        }
        if (!(any_in && any_out)) continue;
        Vec3 acc{0, 0, 0};
        int cnt = 0;
        for (const auto& e : edges) {
          const double a = v[e[0]], b = v[e[1]];
          if ((a < 0) == (b < 0)) continue;
          const double t = a / (a - b);
          const Vec3 p = node(i + corner[e[0]][0], j + corner[e[0]][1], k + corner[e[0]][2]);
          const Vec3 q = node(i + corner[e[1]][0], j + corner[e[1]][1], k + corner[e[1]][2]);
          for (int ax = 0; ax < 3; ++ax) acc[ax] += p[ax] + t * (q[ax] - p[ax]);
          ++cnt;
        }
        for (int ax = 0; ax < 3; ++ax) acc[ax] /= cnt;
        cell_vertex.emplace(cell_id(i, j, k), static_cast<int>(verts.size()));
        verts.push_back(acc);
      }

  // One quad per sign-changing lattice edge, wound so the normal points outward.
  std::vector<Triangle> tris;
  auto emit_quad = [&](int a, int b, int c, int d) {
    if (dist2(verts[a], verts[c]) <= dist2(verts[b], verts[d])) {
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    } else {
      tris.push_back({a, b, d});
      tris.push_back({b, c, d});
    }
  };
  for (int k = 1; k + 1 < n[2]; ++k)
    for (int j = 1; j + 1 < n[1]; ++j)
      for (int i = 1; i + 1 < n[0]; ++i) {
        const double f0 = f[nid(i, j, k)];
        for (int axis = 0; axis < 3; ++axis) {
          const int di = axis == 0, dj = axis == 1, dk = axis == 2;
          const double f1 = f[nid(i + di, j + dj, k + dk)];
          if ((f0 < 0) == (f1 < 0)) continue;
          // Cells sharing the edge, ordered counter-clockwise about +axis.
          int q[4];
          if (axis == 0) {
            q[0] = cell_vertex.at(cell_id(i, j - 1, k - 1));
            q[1] = cell_vertex.at(cell_id(i, j, k - 1));
            q[2] = cell_vertex.at(cell_id(i, j, k));
            q[3] = cell_vertex.at(cell_id(i, j - 1, k));
          } else if (axis == 1) {
            q[0] = cell_vertex.at(cell_id(i - 1, j, k - 1));
            q[1] = cell_vertex.at(cell_id(i - 1, j, k));
            q[2] = cell_vertex.at(cell_id(i, j, k));
            q[3] = cell_vertex.at(cell_id(i, j, k - 1));
          } else {
            q[0] = cell_vertex.at(cell_id(i - 1, j - 1, k));
            q[1] = cell_vertex.at(cell_id(i, j - 1, k));
            q[2] = cell_vertex.at(cell_id(i, j, k));
            q[3] = cell_vertex.at(cell_id(i - 1, j, k));
          }
          if (f0 < 0) {
            emit_quad(q[0], q[1], q[2], q[3]);
          } else {
            emit_quad(q[3], q[2], q[1], q[0]);
          }
        }
      }

  // Tangential smoothing towards the one-ring centroid, then back onto the surface.
  std::vector<std::vector<int>> ring(verts.size());
  for (const auto& t : tris)
    for (int e = 0; e < 3; ++e) {
      ring[t[e]].push_back(t[(e + 1) % 3]);
      ring[t[e]].push_back(t[(e + 2) % 3]);
    }
  for (auto& r : ring) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  for (auto& v : verts) v = surf.project(v);
  for (int it = 0; it < 12; ++it) {
    std::vector<Vec3> next = verts;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      Vec3 c{0, 0, 0};
      for (int w : ring[v])
        for (int a = 0; a < 3; ++a) c[a] += verts[w][a];
      for (int a = 0; a < 3; ++a) c[a] = c[a] / ring[v].size() - verts[v][a];
      Vec3 g = surf.gradient(verts[v]);
      const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
      for (int a = 0; a < 3; ++a) g[a] /= gn;
      const double cn = c[0] * g[0] + c[1] * g[1] + c[2] * g[2];
      for (int a = 0; a < 3; ++a) next[v][a] = verts[v][a] + 0.5 * (c[a] - cn * g[a]);
      next[v] = surf.project(next[v]);
    }
    verts = std::move(next);
  }
  return SurfaceMesh::build(std::move(verts), std::move(tris));
}

SurfaceMesh make_three_atom_surface(double target_edge) {
  const Vec3 c[] = {{0.0, 1.0, 0.0}, {-0.864, -0.5, 0.0}, {0.864, -0.5, 0.0}};
  return mesh_sphere_union(c, 1.0, target_edge);
}

SurfaceMesh make_six_atom_surface(double target_edge) {
  const Vec3 c[] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  return mesh_sphere_union(c, 1.0, target_edge);
}

SurfaceMesh builtin_mesh(std::string_view name) {
  auto suffix_int = [&](std::string_view prefix) {
    int v = 0;
    const auto tail = name.substr(prefix.size());
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), v);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
      throw std::invalid_argument("bad builtin mesh parameter in '" + std::string(name) + "'");
    }
    return v;
  };
  if (name.starts_with("icosphere:")) return make_icosphere(suffix_int("icosphere:"));
  if (name.starts_with("geosphere:")) return make_geodesic_sphere(suffix_int("geosphere:"));
  if (name == "threeatom") return make_three_atom_surface();
  if (name == "sixatom") return make_six_atom_surface();
  throw std::invalid_argument("unknown builtin mesh '" + std::string(name) + "'");
}

}  // namespace geoflow::core
