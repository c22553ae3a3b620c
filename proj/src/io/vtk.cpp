#include "geoflow/io/vtk.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "geoflow/error.hpp"

namespace geoflow::io {
namespace {

void put(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, ptr);
}

void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
    throw std::invalid_argument("vtk array name must be a non-empty word: '" + name + "'");
  }
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << body;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace

std::string format_vtk_grid(const std::vector<NamedGridField>& fields) {
  if (fields.empty()) throw std::invalid_argument("vtk grid output needs at least one field");
  const core::Grid3D& g = fields.front().second->grid();
  for (const auto& [name, f] : fields) {
    check_name(name);
    if (!(f->grid() == g)) throw std::invalid_argument("vtk field '" + name + "' lives on a different grid");
    if (f->size() != g.size()) throw std::invalid_argument("vtk field '" + name + "' has the wrong length");
  }
  std::string out = "# vtk DataFile Version 3.0\ngeoflow grid\nASCII\nDATASET STRUCTURED_POINTS\n";
  out += "DIMENSIONS " + std::to_string(g.dims[0]) + " " + std::to_string(g.dims[1]) + " " +
         std::to_string(g.dims[2]) + "\nORIGIN ";
  for (int a = 0; a < 3; ++a) {
    put(out, g.origin[a]);
    out += a < 2 ? " " : "\nSPACING ";
  }
  for (int a = 0; a < 3; ++a) {
    put(out, g.spacing[a]);
    out += a < 2 ? " " : "\n";
  }
  out += "POINT_DATA " + std::to_string(g.size()) + "\n";
  for (const auto& [name, f] : fields) {
    out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t n = 0; n < f->size(); ++n) {
      put(out, (*f)[n]);
      out += '\n';
    }
  }
  return out;
}

void write_vtk_grid(const std::string& path, const std::vector<NamedGridField>& fields) {
  write_file(path, format_vtk_grid(fields));
}

std::string format_vtk_mesh(const core::SurfaceMesh& mesh, const std::vector<NamedSurfaceField>& fields) {
  for (const auto& [name, f] : fields) {
    check_name(name);
    if (f->size() != mesh.vertex_count()) {
      throw std::invalid_argument("vtk field '" + name + "' has " + std::to_string(f->size()) + " values for " +
                                  std::to_string(mesh.vertex_count()) + " vertices");
    }
  }
  std::string out = "# vtk DataFile Version 3.0\ngeoflow mesh\nASCII\nDATASET POLYDATA\n";
  out += "POINTS " + std::to_string(mesh.vertex_count()) + " double\n";
  for (const auto& v : mesh.vertices()) {
    put(out, v[0]);
    out += ' ';
    put(out, v[1]);
    out += ' ';
    put(out, v[2]);
    out += '\n';
  }
  out += "POLYGONS " + std::to_string(mesh.triangle_count()) + " " + std::to_string(4 * mesh.triangle_count()) + "\n";
  for (const auto& t : mesh.triangles()) {
    out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  }
  if (!fields.empty()) {
    out += "POINT_DATA " + std::to_string(mesh.vertex_count()) + "\n";
    for (const auto& [name, f] : fields) {
      out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
      for (double v : *f) {
        put(out, v);
        out += '\n';
      }
    }
  }
  return out;
}

void write_vtk_mesh(const std::string& path, const core::SurfaceMesh& mesh,
                    const std::vector<NamedSurfaceField>& fields) {
  write_file(path, format_vtk_mesh(mesh, fields));
}

VtkMesh read_vtk_mesh(std::string_view text) {
  std::string body(text);
  const std::size_t nl = body.find('\n');
  if (nl == std::string::npos || body.compare(0, nl, "# vtk DataFile Version 3.0") != 0) {
    throw ConfigError("vtk: missing '# vtk DataFile Version 3.0' header");
  }
  const std::size_t title_end = body.find('\n', nl + 1);
  if (title_end == std::string::npos) throw ConfigError("vtk: truncated header");
  std::istringstream in(body.substr(title_end + 1));
  auto expect = [&](const std::string& word) {
    std::string w;
    if (!(in >> w) || w != word) throw ConfigError("vtk: expected '" + word + "', found '" + w + "'");
  };
  auto count = [&](const char* what) {
    long long n = -1;
    if (!(in >> n) || n < 0) throw ConfigError(std::string("vtk: bad count after ") + what);
    return static_cast<std::size_t>(n);
  };
  auto number = [&]() {
    std::string w;
    if (!(in >> w)) throw ConfigError("vtk: unexpected end of data");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) throw ConfigError("vtk: bad number '" + w + "'");
    return v;
  };
  expect("ASCII");
  expect("DATASET");
  expect("POLYDATA");
  expect("POINTS");
  const std::size_t nv = count("POINTS");
  std::string type;
  in >> type;
  std::vector<core::Vec3> verts(nv);
  for (auto& v : verts) v = {number(), number(), number()};
  expect("POLYGONS");
  const std::size_t nt = count("POLYGONS");
  if (count("POLYGONS") != 4 * nt) throw ConfigError("vtk: only triangles are supported");
  std::vector<core::Triangle> tris(nt);
  for (auto& t : tris) {
    if (number() != 3.0) throw ConfigError("vtk: only triangles are supported");
    for (int& c : t) c = static_cast<int>(number());
  }
  VtkMesh out{core::SurfaceMesh{}, {}};
  try {
    out.mesh = core::SurfaceMesh::build(std::move(verts), std::move(tris));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("vtk: ") + e.what());
  }
  std::string word;
  if (!(in >> word)) return out;
  if (word != "POINT_DATA" || count("POINT_DATA") != nv) throw ConfigError("vtk: bad POINT_DATA section");
  while (in >> word) {
    if (word != "SCALARS") throw ConfigError("vtk: expected SCALARS, found '" + word + "'");
    std::string name, dtype;
    in >> name >> dtype;
    if (count("SCALARS") != 1) throw ConfigError("vtk: only single-component scalars are supported");
    expect("LOOKUP_TABLE");
    in >> word;
    core::SurfaceField f(nv);
    for (double& v : f) v = number();
    out.fields[name] = std::move(f);
  }
  return out;
}

VtkMesh load_vtk_mesh(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return read_vtk_mesh(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace geoflow::io
