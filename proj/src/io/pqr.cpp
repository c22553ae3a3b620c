#include "geoflow/io/pqr.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "geoflow/error.hpp"

namespace geoflow::io {
namespace {

double number(const std::string& tok, int line, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ConfigError("pqr line " + std::to_string(line) + ": " + what + " is not a number: '" + tok + "'");
  }
  return v;
}

}  // namespace

std::vector<PqrAtom> read_pqr(std::string_view text) {
  std::vector<PqrAtom> atoms;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || (tok[0] != "ATOM" && tok[0] != "HETATM")) continue;
    if (tok.size() != 10 && tok.size() != 11) {
      throw ConfigError("pqr line " + std::to_string(line_no) + ": expected 10 or 11 fields, found " +
                        std::to_string(tok.size()));
    }
    const std::size_t off = tok.size() - 10;
    PqrAtom a;
    a.name = tok[2];
    a.residue = tok[3];
    for (int d = 0; d < 3; ++d) a.position[d] = number(tok[5 + off + d], line_no, "coordinate");
    a.charge = number(tok[8 + off], line_no, "charge");
    a.radius = number(tok[9 + off], line_no, "radius");
    if (!(a.radius > 0.0)) throw ConfigError("pqr line " + std::to_string(line_no) + ": radius must be positive");
    atoms.push_back(std::move(a));
  }
  if (atoms.empty()) throw ConfigError("no atoms");
  return atoms;
}

std::vector<PqrAtom> load_pqr(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open pqr file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return read_pqr(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace geoflow::io
