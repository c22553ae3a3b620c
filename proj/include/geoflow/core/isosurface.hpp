#pragma once

#include <span>
#include <string_view>

#include "geoflow/core/mesh.hpp"

namespace geoflow::core {

/// Quasi-uniform triangulation of the (smoothly blended) union of equal spheres.
/// Contours the blended distance function with a surface-nets pass on a grid of
/// spacing `target_edge`, splits quads along the shorter diagonal, then alternates
/// tangential relaxation with projection back onto the surface.
SurfaceMesh mesh_sphere_union(std::span<const Vec3> centers, double radius, double target_edge);

/// Unit-radius three-sphere solute at (0,1,0), (-0.864,-0.5,0), (0.864,-0.5,0).
SurfaceMesh make_three_atom_surface(double target_edge = 0.1);

/// Unit-radius six-sphere solute at (+-1,0,0), (0,+-1,0), (0,0,+-1).
SurfaceMesh make_six_atom_surface(double target_edge = 0.1);

/// Resolves "icosphere:n", "geosphere:f", "threeatom" or "sixatom" (the part after
/// "builtin:"). Throws std::invalid_argument for anything else.
SurfaceMesh builtin_mesh(std::string_view name);

}  // namespace geoflow::core
