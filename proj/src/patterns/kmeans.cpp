#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "geoflow/io/rng.hpp"
#include "geoflow/patterns/patterns.hpp"

namespace geoflow::patterns {
namespace {

double dist2(const Vec3& a, const Vec3& b) {
  const double x = a[0] - b[0], y = a[1] - b[1], z = a[2] - b[2];
  return x * x + y * y + z * z;
}

struct Partition {
  std::vector<int> label;
  std::vector<Vec3> centers;
  double inertia = 0.0;
};

// Index drawn with probability proportional to weight.
std::size_t draw(std::span<const double> weight, io::Rng& rng) {
  double total = 0.0;
  for (double w : weight) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    u -= weight[i];
    if (u < 0.0) return i;
  }
  for (std::size_t i = weight.size(); i-- > 0;) {
    if (weight[i] > 0.0) return i;
  }
  return 0;
}

Partition lloyd(const std::vector<Vec3>& x, const std::vector<double>& w, int k, io::Rng& rng) {
  const std::size_t n = x.size();
  Partition p;
  p.centers.push_back(x[draw(w, rng)]);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity()), weight(n);
  while (static_cast<int>(p.centers.size()) < k) {
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], dist2(x[i], p.centers.back()));
      weight[i] = w[i] * d2[i];
    }
    p.centers.push_back(x[draw(weight, rng)]);
  }

  p.label.assign(n, -1);
  for (int it = 0; it < 300; ++it) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = dist2(x[i], p.centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2(x[i], p.centers[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (best != p.label[i]) {
        p.label[i] = best;
        moved = true;
      }
    }
    if (!moved) break;
    std::vector<Vec3> sum(k, Vec3{0.0, 0.0, 0.0});
    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = p.label[i];
      for (int a = 0; a < 3; ++a) sum[c][a] += w[i] * x[i][a];
      mass[c] += w[i];
    }
    for (int c = 0; c < k; ++c) {
      if (mass[c] > 0.0) {
        for (int a = 0; a < 3; ++a) p.centers[c][a] = sum[c][a] / mass[c];
        continue;
      }
      // Empty cluster: restart it at the point farthest from its center.
      std::size_t far = 0;
      double fd = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = dist2(x[i], p.centers[p.label[i]]);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      p.centers[c] = x[far];
    }
  }
  p.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) p.inertia += w[i] * dist2(x[i], p.centers[p.label[i]]);
  return p;
}

Partition best_of(const std::vector<Vec3>& x, const std::vector<double>& w, int k, io::Rng& rng) {
  Partition best = lloyd(x, w, k, rng);
  for (int r = 1; r < 4; ++r) {
    Partition p = lloyd(x, w, k, rng);
    if (p.inertia < best.inertia) best = std::move(p);
  }
  return best;
}

// Area-weighted mean silhouette; points alone in their cluster score 0.
double silhouette(const std::vector<Vec3>& x, const std::vector<double>& w, const Partition& p, int k) {
  const std::size_t n = x.size();
  std::vector<double> sum(k), mass(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) mass[p.label[i]] += w[i];
  double total = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum[p.label[j]] += w[j] * std::sqrt(dist2(x[i], x[j]));
    }
    const int own = p.label[i];
    double s = 0.0;
    const double own_mass = mass[own] - w[i];
    if (own_mass > 0.0) {
      const double a = sum[own] / own_mass;
      double b = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        if (c != own && mass[c] > 0.0) b = std::min(b, sum[c] / mass[c]);
      }
      if (std::isfinite(b) && std::max(a, b) > 0.0) s = (b - a) / std::max(a, b);
    }
    total += w[i] * s;
    wsum += w[i];
  }
  return total / wsum;
}

}  // namespace

DomainReport kmeans_domain_analysis(const SurfaceMesh& mesh, std::span<const double> phi, int k_clusters,
                                    io::Rng& rng, int k_min, int k_max) {
  core::require_field_on(mesh, phi, "kmeans_domain_analysis");
  std::vector<int> index;
  std::vector<Vec3> x;
  std::vector<double> w;
  const auto A = mesh.vertex_areas();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] > 0.0) {
      index.push_back(static_cast<int>(i));
      x.push_back(mesh.vertices()[i]);
      w.push_back(A[i]);
    }
  }
  const int npos = static_cast<int>(x.size());
  if (npos == 0) throw std::invalid_argument("no vertex has phi > 0");
  if (k_clusters < 0 || k_clusters > npos) {
    throw std::invalid_argument("k_clusters = " + std::to_string(k_clusters) + " outside [1, " +
                                std::to_string(npos) + "]");
  }

  Partition part;
  double score = 0.0;
  int k = k_clusters;
  if (k > 0) {
    part = best_of(x, w, k, rng);
    if (k > 1) score = silhouette(x, w, part, k);
  } else {
    if (k_min < 2 || k_max < k_min) throw std::invalid_argument("need 2 <= k_min <= k_max");
    bool spread = false;
    for (const auto& p : x) spread = spread || dist2(p, x[0]) > 0.0;
    const int hi = std::min(k_max, npos);
    if (!spread || hi < k_min) {
      k = 1;
      part = best_of(x, w, 1, rng);
    } else {
      score = -2.0;
      for (int kk = k_min; kk <= hi; ++kk) {
        Partition p = best_of(x, w, kk, rng);
        const double s = silhouette(x, w, p, kk);
        if (s > score) {
          score = s;
          part = std::move(p);
          k = kk;
        }
      }
    }
  }

  DomainReport r;
  r.silhouette = k > 1 ? score : 0.0;
  r.clusters.resize(k);
  for (int i = 0; i < npos; ++i) {
    Cluster& c = r.clusters[part.label[i]];
    c.members.push_back(index[i]);
    c.area += w[i];
    for (int a = 0; a < 3; ++a) c.centroid[a] += w[i] * x[i][a];
  }
  std::erase_if(r.clusters, [](const Cluster& c) { return c.members.empty(); });
  r.min_radius = std::numeric_limits<double>::infinity();
  for (Cluster& c : r.clusters) {
    for (int a = 0; a < 3; ++a) c.centroid[a] /= c.area;
    c.radius = std::sqrt(c.area / std::numbers::pi);
    r.positive_area += c.area;
    r.mean_radius += c.radius;
    r.area_weighted_radius += c.area * c.radius;
    r.min_radius = std::min(r.min_radius, c.radius);
    r.max_radius = std::max(r.max_radius, c.radius);
  }
  r.mean_radius /= static_cast<double>(r.clusters.size());
  r.area_weighted_radius /= r.positive_area;
  return r;
}

}  // namespace geoflow::patterns
