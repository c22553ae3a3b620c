#pragma once

#include <string>
#include <string_view>

#include "geoflow/core/mesh.hpp"

namespace geoflow::io {

/// ASCII OFF with 0-based triangular faces. Throws ConfigError on syntax errors and on
/// meshes rejected by SurfaceMesh::build.
core::SurfaceMesh read_off(std::string_view text);
core::SurfaceMesh load_off(const std::string& path);

std::string write_off(const core::SurfaceMesh& mesh);

/// "builtin:<name>" resolves through core::builtin_mesh, anything else is an OFF path.
core::SurfaceMesh load_mesh(const std::string& spec);

}  // namespace geoflow::io
