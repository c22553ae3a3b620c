#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geoflow/core/grid.hpp"
#include "geoflow/core/mesh.hpp"

namespace geoflow::io {

using NamedGridField = std::pair<std::string, const core::ScalarField3D*>;
using NamedSurfaceField = std::pair<std::string, const core::SurfaceField*>;

/// Legacy ASCII STRUCTURED_POINTS. All fields must share one grid; throws
/// std::invalid_argument before producing any output otherwise.
std::string format_vtk_grid(const std::vector<NamedGridField>& fields);
void write_vtk_grid(const std::string& path, const std::vector<NamedGridField>& fields);

/// Legacy ASCII POLYDATA with per-vertex scalars.
std::string format_vtk_mesh(const core::SurfaceMesh& mesh, const std::vector<NamedSurfaceField>& fields);
void write_vtk_mesh(const std::string& path, const core::SurfaceMesh& mesh,
                    const std::vector<NamedSurfaceField>& fields);

struct VtkMesh {
  core::SurfaceMesh mesh;
  std::map<std::string, core::SurfaceField> fields;
};

/// Reads the ASCII POLYDATA subset written by format_vtk_mesh (triangles, per-vertex
/// double scalars). Throws ConfigError on anything else.
VtkMesh read_vtk_mesh(std::string_view text);
VtkMesh load_vtk_mesh(const std::string& path);

}  // namespace geoflow::io
