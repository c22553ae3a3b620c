#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "geoflow/core/mesh.hpp"
#include "geoflow/error.hpp"
#include "geoflow/io/off.hpp"
#include "geoflow/io/pqr.hpp"
#include "geoflow/io/trace.hpp"
#include "geoflow/io/vtk.hpp"

using namespace geoflow;
using namespace geoflow::io;

namespace {

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

// Keyword and count check of a legacy VTK STRUCTURED_POINTS body.
void check_structured_points(const std::string& text, int nx, int ny, int nz, int fields) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET STRUCTURED_POINTS");
  std::string word;
  int d[3];
  in >> word >> d[0] >> d[1] >> d[2];
  CHECK(word == "DIMENSIONS");
  CHECK(d[0] == nx);
  CHECK(d[1] == ny);
  CHECK(d[2] == nz);
  double v;
  in >> word >> v >> v >> v;
  CHECK(word == "ORIGIN");
  in >> word >> v >> v >> v;
  CHECK(word == "SPACING");
  long npts;
  in >> word >> npts;
  CHECK(word == "POINT_DATA");
  CHECK(npts == static_cast<long>(nx) * ny * nz);
  for (int f = 0; f < fields; ++f) {
    std::string name, type, table, def;
    int comps;
    in >> word >> name >> type >> comps >> table >> def;
    CHECK(word == "SCALARS");
    CHECK(comps == 1);
    CHECK(table == "LOOKUP_TABLE");
    for (long i = 0; i < npts; ++i) CHECK_MESSAGE(static_cast<bool>(in >> v), "value " << i);
  }
  CHECK_FALSE(static_cast<bool>(in >> word));
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("PQR records") {
  const auto one = read_pqr("ATOM 1 O HOH 1 0.0 0.0 0.0 -0.8 1.6\n");
  REQUIRE(one.size() == 1);
  CHECK(one[0].name == "O");
  CHECK(one[0].charge == -0.8);
  CHECK(one[0].radius == 1.6);

  const auto two = read_pqr(
      "REMARK test\nATOM 1 C1 DIA 1 -1 0 0 0.4 1.0\nHETATM 2 O1 DIA A 1 1 0 0 -0.4 1.0\nTER\nEND\n");
  REQUIRE(two.size() == 2);
  CHECK(two[0].charge + two[1].charge == doctest::Approx(0.0));
  CHECK(two[1].position[0] == 1.0);

  try {
    read_pqr("");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "no atoms");
  }
  CHECK_THROWS_AS(read_pqr("ATOM 1 O HOH 1 0.0 0.0 zero -0.8 1.6\n"), ConfigError);
  CHECK_THROWS_AS(read_pqr("ATOM 1 O HOH 1 0.0 0.0\n"), ConfigError);
  CHECK_THROWS_AS(read_pqr("ATOM 1 O HOH 1 0.0 0.0 0.0 -0.8 -1\n"), ConfigError);
}

TEST_CASE("VTK grid output") {
  const core::Grid3D g = core::Grid3D::cube(0.0, 1.0, 4, core::Boundary::periodic);
  const core::ScalarField3D a = core::ScalarField3D::sample(g, [](const core::Vec3& x) { return x[0] + 2 * x[2]; });
  const core::ScalarField3D b(g, 0.25);
  const std::string text = format_vtk_grid({{"a", &a}, {"b", &b}});
  CHECK(text.find("DIMENSIONS 4 4 4\n") != std::string::npos);
  check_structured_points(text, 4, 4, 4, 2);

  const core::Grid3D g5 = core::Grid3D::cube(0.0, 1.0, 5, core::Boundary::periodic);
  const core::ScalarField3D c(g5);
  CHECK_THROWS_AS(format_vtk_grid({{"a", &a}, {"c", &c}}), std::invalid_argument);
  CHECK_THROWS_AS(format_vtk_grid({{"two words", &a}}), std::invalid_argument);
}

TEST_CASE("VTK mesh output re-parses to the same mesh and fields") {
  const core::SurfaceMesh ico = core::make_icosphere(0);
  std::vector<double> f(12);
  for (int i = 0; i < 12; ++i) f[i] = 0.1 * i - 0.35;
  const std::string text = format_vtk_mesh(ico, {{"phi", &f}});
  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(text.find("POINTS 12 double\n") != std::string::npos);
  CHECK(text.find("POLYGONS 20 80\n") != std::string::npos);
  CHECK(text.find("POINT_DATA 12\n") != std::string::npos);

  const VtkMesh back = read_vtk_mesh(text);
  CHECK(back.mesh.vertices() == ico.vertices());
  CHECK(back.mesh.triangles() == ico.triangles());
  REQUIRE(back.fields.count("phi") == 1);
  CHECK(back.fields.at("phi") == f);

  std::vector<double> short_field(11);
  CHECK_THROWS_AS(format_vtk_mesh(ico, {{"x", &short_field}}), std::invalid_argument);
  CHECK_THROWS_AS(read_vtk_mesh("# vtk DataFile Version 2.0\nx\nASCII\n"), ConfigError);
  CHECK_THROWS_AS(read_vtk_mesh(text.substr(0, text.size() / 2)), ConfigError);
}

TEST_CASE("VTK writer fails before touching a file on bad input") {
  const auto dir = std::filesystem::temp_directory_path() / "geoflow_vtk_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "bad.vtk").string();
  std::filesystem::remove(path);
  const core::SurfaceMesh ico = core::make_icosphere(0);
  std::vector<double> bad(3);
  CHECK_THROWS(write_vtk_mesh(path, ico, {{"x", &bad}}));
  CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("trace CSV") {
  Trace t({"t", "energy"});
  CHECK(t.csv() == "t,energy\n");
  t.add({0.0, 1.5});
  t.add({0.1, 1.25});
  CHECK(count_lines(t.csv()) == 3);
  CHECK(t.csv() == "t,energy\n0,1.5\n0.1,1.25\n");
  CHECK_THROWS_AS(t.add({0.05, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(t.add({0.2}), std::invalid_argument);
  CHECK_THROWS_AS(t.add({0.3, std::nan("")}), std::invalid_argument);
  // Full precision survives the text form.
  Trace p({"t", "x"});
  p.add({1.0, 0.1 + 0.2});
  const std::string csv = p.csv();
  const std::string last = csv.substr(csv.rfind(',') + 1);
  CHECK(std::stod(last) == 0.1 + 0.2);
}

TEST_CASE("OFF round trip and builtin resolution") {
  const core::SurfaceMesh m = core::make_icosphere(1);
  const core::SurfaceMesh back = read_off(write_off(m));
  CHECK(back.vertex_count() == m.vertex_count());
  CHECK(back.triangles() == m.triangles());
  CHECK(back.total_area() == doctest::Approx(m.total_area()).epsilon(1e-12));
  CHECK(load_mesh("builtin:icosphere:2").vertex_count() == 162);
  CHECK_THROWS_AS(read_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n"), ConfigError);
  CHECK_THROWS_AS(read_off("PLY\n"), ConfigError);
  CHECK_THROWS(load_mesh("/nonexistent/mesh.off"));
}

}  // TEST_SUITE
