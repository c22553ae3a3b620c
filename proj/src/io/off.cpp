#include "geoflow/io/off.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "geoflow/core/isosurface.hpp"
#include "geoflow/error.hpp"

namespace geoflow::io {

core::SurfaceMesh read_off(std::string_view text) {
  std::istringstream in{std::string(text)};
  // Comments start with '#'; strip them so the token stream is clean.
  std::ostringstream clean;
  for (std::string line; std::getline(in, line);) {
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    clean << line << '\n';
  }
  std::istringstream ts(clean.str());
  std::string magic;
  if (!(ts >> magic) || magic != "OFF") throw ConfigError("off: missing 'OFF' header");
  long nv = -1, nf = -1, ne = -1;
  if (!(ts >> nv >> nf >> ne) || nv < 3 || nf < 1) throw ConfigError("off: bad vertex/face counts");
  std::vector<core::Vec3> verts(static_cast<std::size_t>(nv));
  for (auto& v : verts) {
    if (!(ts >> v[0] >> v[1] >> v[2])) throw ConfigError("off: truncated vertex list");
  }
  std::vector<core::Triangle> tris(static_cast<std::size_t>(nf));
  for (long f = 0; f < nf; ++f) {
    int count = 0;
    if (!(ts >> count)) throw ConfigError("off: truncated face list");
    if (count != 3) throw ConfigError("off: face " + std::to_string(f) + " is not a triangle");
    for (int c = 0; c < 3; ++c) {
      if (!(ts >> tris[f][c])) throw ConfigError("off: truncated face list");
      if (tris[f][c] < 0 || tris[f][c] >= nv) {
        throw ConfigError("off: face " + std::to_string(f) + " references vertex " + std::to_string(tris[f][c]));
      }
    }
  }
  try {
    return core::SurfaceMesh::build(std::move(verts), std::move(tris));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("off: ") + e.what());
  }
}

core::SurfaceMesh load_off(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_off(ss.str());
}

std::string write_off(const core::SurfaceMesh& mesh) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << ' ' << mesh.edge_count() << '\n';
  for (const auto& v : mesh.vertices()) os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& t : mesh.triangles()) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return os.str();
}

core::SurfaceMesh load_mesh(const std::string& spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.starts_with(prefix)) {
    try {
      return core::builtin_mesh(std::string_view(spec).substr(prefix.size()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return load_off(spec);
}

}  // namespace geoflow::io
