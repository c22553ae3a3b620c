#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geoflow/core/grid.hpp"

namespace geoflow::io {

struct PqrAtom {
  std::string name;
  std::string residue;
  core::Vec3 position{};
  double charge = 0.0;
  double radius = 0.0;
};

/// Reads whitespace-delimited ATOM/HETATM records (record, serial, name, resname,
/// resid, x, y, z, charge, radius); an optional chain column before resid is
/// tolerated. Other records are skipped. Throws ConfigError on malformed records or
/// when no atoms are found.
std::vector<PqrAtom> read_pqr(std::string_view text);

std::vector<PqrAtom> load_pqr(const std::string& path);

}  // namespace geoflow::io
