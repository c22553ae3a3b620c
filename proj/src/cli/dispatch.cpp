#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geoflow/cli/cli.hpp"
#include "geoflow/error.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/io/off.hpp"
#include "geoflow/io/rng.hpp"
#include "geoflow/io/trace.hpp"
#include "geoflow/io/vtk.hpp"
#include "geoflow/localization/localization.hpp"
#include "geoflow/patterns/patterns.hpp"
#include "geoflow/simd/kernels.hpp"
#include "geoflow/solvation/solvation.hpp"

namespace geoflow::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string vtk_out;
  std::string trace;
  std::vector<std::string> sets;
  bool quiet = false;
};

struct Flags {
  Common common;
  std::string mesh;
  std::string model;
  std::string input;
  std::string field = "phi";
  std::string off_out;
};

void add_common(CLI::App* sub, Common& c, bool outputs) {
  sub->add_option("--config", c.config, "Configuration file");
  sub->add_option("--seed", c.seed, "Random seed (GEOFLOW_SEED takes precedence)");
  sub->add_option("--set", c.sets, "Override a config key, e.g. pattern.H_c=2.5 (repeatable)");
  sub->add_flag("--quiet", c.quiet, "Print only the summary line");
  if (outputs) {
    sub->add_option("--vtk-out", c.vtk_out, "Directory for VTK output");
    sub->add_option("--trace", c.trace, "CSV trace file");
  }
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// Config file (or the model's defaults), then --set overrides, then dedicated flags,
// then GEOFLOW_SEED.
io::RunConfig load(io::Model model, const Common& c) {
  io::RunConfig cfg = io::RunConfig::defaults(model);
  if (!c.config.empty()) {
    cfg = io::load_config(c.config);
    if (cfg.model() != model) {
      throw ConfigError(c.config + ": model is '" + std::string(io::model_name(cfg.model())) + "', expected '" +
                        std::string(io::model_name(model)) + "'");
    }
  }
  for (const auto& s : c.sets) cfg.set(s);
  if (!c.vtk_out.empty()) cfg.set("output.vtk_dir", c.vtk_out);
  if (!c.trace.empty()) cfg.set("output.trace", c.trace);
  if (c.seed) cfg.set("seed", std::to_string(*c.seed));
  cfg.set("seed", std::to_string(io::seed_from_env(cfg.seed())));
  return cfg;
}

std::string base_dir(const Common& c) {
  return c.config.empty() ? std::string() : fs::path(c.config).parent_path().string();
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::string vtk_path(const io::RunConfig& cfg, const char* name) {
  const std::string& dir = cfg.str("output.vtk_dir");
  if (dir.empty()) return {};
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void emit_trace(const io::Trace& trace, const io::RunConfig& cfg, const Common& c, std::ostream& out) {
  const std::string& path = cfg.str("output.trace");
  if (path.empty()) return;
  ensure_parent(path);
  io::write_trace(trace, path);
  if (!c.quiet) out << "wrote " << path << "\n";
}

int run_solvate(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = load(io::Model::solvate, f.common);
  const solvation::SolvationParams p = solvation::params_from_config(cfg);
  const solvation::RunOptions opt = solvation::options_from_config(cfg);
  const std::vector<solvation::Atom> atoms = solvation::atoms_from_config(cfg, base_dir(f.common));
  const solvation::SolvationResult r = solvation::run_solvation(atoms, p, opt);

  io::Trace trace({"cycle", "dt", "surface", "pressure", "dispersion", "electrostatic", "ion", "total", "area"});
  for (const auto& c : r.trace) {
    trace.add({static_cast<double>(c.cycle), c.dt, c.energy.surface, c.energy.pressure, c.energy.dispersion,
               c.energy.electrostatic, c.energy.ion, c.energy.total, c.area});
  }
  emit_trace(trace, cfg, f.common, out);
  if (const std::string path = vtk_path(cfg, "solvate.vtk"); !path.empty()) {
    io::write_vtk_grid(path, {{"S", &r.state.S}, {"phi", &r.state.phi}});
    if (!f.common.quiet) out << "wrote " << path << "\n";
  }
  const auto& e = r.state.energy;
  const double polar = e.electrostatic + e.ion - e.vacuum;
  const double nonpolar = e.surface + e.pressure + e.dispersion;
  out << "solvate: dG = " << fmt(e.delta) << " kcal/mol (polar " << fmt(polar) << ", nonpolar " << fmt(nonpolar)
      << "), " << r.trace.size() - 1 << " cycles, " << (r.converged ? "converged" : "not converged") << "\n";
  if (!r.converged) {
    throw NumericalError("energy change still above solver.tol_G after solver.max_cycles = " +
                         std::to_string(opt.max_cycles) + " cycles");
  }
  return 0;
}

void report_domains(const patterns::DomainReport& rep, const Common& c, std::ostream& out) {
  if (c.quiet) return;
  for (std::size_t i = 0; i < rep.clusters.size(); ++i) {
    const auto& cl = rep.clusters[i];
    out << "  domain " << i << ": " << cl.members.size() << " vertices, area " << fmt(cl.area) << ", radius "
        << fmt(cl.radius) << "\n";
  }
}

std::string domain_summary(const patterns::DomainReport& rep) {
  return std::to_string(rep.clusters.size()) + " domains, mean radius " + fmt(rep.mean_radius) + " (min " +
         fmt(rep.min_radius) + ", max " + fmt(rep.max_radius) + "), silhouette " + fmt(rep.silhouette, 4);
}

std::vector<double> cluster_labels(const core::SurfaceMesh& mesh, const patterns::DomainReport& rep) {
  std::vector<double> label(mesh.vertex_count(), -1.0);
  for (std::size_t c = 0; c < rep.clusters.size(); ++c)
    for (int v : rep.clusters[c].members) label[v] = static_cast<double>(c);
  return label;
}

int run_rafts(const Flags& f, std::ostream& out) {
  Common c = f.common;
  if (!f.mesh.empty()) c.sets.push_back("pattern.mesh=" + f.mesh);
  if (!f.model.empty()) c.sets.push_back("pattern.model=" + f.model);
  const io::RunConfig cfg = load(io::Model::rafts, c);
  const patterns::PatternParams p = patterns::pattern_params_from_config(cfg);
  const patterns::PatternRunOptions opt = patterns::pattern_options_from_config(cfg);
  const core::SurfaceMesh mesh = io::load_mesh(cfg.str("pattern.mesh"));
  const patterns::PatternRun run = patterns::run_pattern_simulation(mesh, p, opt);

  io::Trace trace({"t", "energy", "mass"});
  for (const auto& tp : run.trace) trace.add({tp.t, tp.energy, tp.mass});
  emit_trace(trace, cfg, c, out);
  if (const std::string path = vtk_path(cfg, "rafts.vtk"); !path.empty()) {
    const core::SurfaceField kappa = patterns::phase_to_geodesic_curvature(mesh, run.phi, p.epsilon);
    const std::vector<double> label = cluster_labels(mesh, run.report);
    io::write_vtk_mesh(path, mesh, {{"phi", &run.phi}, {"geodesic_curvature", &kappa}, {"domain", &label}});
    if (!c.quiet) out << "wrote " << path << "\n";
  }
  report_domains(run.report, c, out);
  out << "rafts: " << domain_summary(run.report) << ", " << run.accepted_steps << " steps (" << run.rejected_steps
      << " rejected)\n";
  return 0;
}

int run_localize(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = load(io::Model::localize, f.common);
  localization::LocalizationOptions opt = localization::localization_options_from_config(cfg);
  const localization::LocalizationResult r = localization::run_localization(opt);

  io::Trace trace({"t", "total_mass", "outer_fraction", "inner_fraction", "max_rho"});
  for (const auto& s : r.trace) trace.add({s.t, s.total_mass, s.outer_fraction, s.inner_fraction, s.max_rho});
  emit_trace(trace, cfg, f.common, out);
  if (const std::string path = vtk_path(cfg, "localize.vtk"); !path.empty()) {
    io::write_vtk_grid(path, {{"phi", &r.membrane.phi}, {"delta", &r.delta}, {"P", &r.P}, {"rho", &r.rho}});
    if (!f.common.quiet) out << "wrote " << path << "\n";
  }
  const auto& first = r.trace.front();
  const auto& last = r.trace.back();
  const double drift = (last.total_mass - first.total_mass) / first.total_mass;
  out << "localize: outer fraction " << fmt(last.outer_fraction, 4) << ", inner fraction "
      << fmt(last.inner_fraction, 4) << " at t = " << fmt(r.t) << ", mass drift " << fmt(drift, 3) << "\n";
  return 0;
}

int run_mesh(const Flags& f, std::ostream& out) {
  if (f.mesh.empty()) throw ConfigError("mesh: --mesh is required");
  const core::SurfaceMesh mesh = io::load_mesh(f.mesh);
  if (!f.off_out.empty()) {
    ensure_parent(f.off_out);
    std::FILE* fp = std::fopen(f.off_out.c_str(), "wb");
    if (!fp) throw ConfigError("cannot write '" + f.off_out + "'");
    const std::string text = io::write_off(mesh);
    const bool ok = std::fwrite(text.data(), 1, text.size(), fp) == text.size();
    if (std::fclose(fp) != 0 || !ok) throw ConfigError("cannot write '" + f.off_out + "'");
    if (!f.common.quiet) out << "wrote " << f.off_out << "\n";
  }
  if (!f.common.vtk_out.empty()) {
    fs::create_directories(f.common.vtk_out);
    const std::string path = (fs::path(f.common.vtk_out) / "mesh.vtk").string();
    const std::vector<double> area(mesh.vertex_areas().begin(), mesh.vertex_areas().end());
    io::write_vtk_mesh(path, mesh, {{"vertex_area", &area}});
    if (!f.common.quiet) out << "wrote " << path << "\n";
  }
  const long euler = static_cast<long>(mesh.vertex_count()) - static_cast<long>(mesh.edge_count()) +
                     static_cast<long>(mesh.triangle_count());
  out << "mesh: " << mesh.vertex_count() << " vertices, " << mesh.triangle_count() << " triangles, euler " << euler
      << ", area " << fmt(mesh.total_area()) << ", mean edge " << fmt(mesh.mean_edge_length()) << "\n";
  return 0;
}

int run_analyze(const Flags& f, std::ostream& out) {
  if (f.input.empty()) throw ConfigError("analyze: --input is required");
  const io::RunConfig cfg = load(io::Model::rafts, f.common);
  const patterns::PatternRunOptions opt = patterns::pattern_options_from_config(cfg);
  const io::VtkMesh in = io::load_vtk_mesh(f.input);
  const auto it = in.fields.find(f.field);
  if (it == in.fields.end()) throw ConfigError(f.input + ": no point field named '" + f.field + "'");
  io::Rng km = io::Rng(opt.seed).substream("kmeans");
  const patterns::DomainReport rep =
      patterns::kmeans_domain_analysis(in.mesh, it->second, opt.k_clusters, km, opt.k_min, opt.k_max);

  io::Trace trace({"domain", "vertices", "area", "radius", "cx", "cy", "cz"});
  for (std::size_t i = 0; i < rep.clusters.size(); ++i) {
    const auto& cl = rep.clusters[i];
    trace.add({static_cast<double>(i), static_cast<double>(cl.members.size()), cl.area, cl.radius, cl.centroid[0],
               cl.centroid[1], cl.centroid[2]});
  }
  emit_trace(trace, cfg, f.common, out);
  report_domains(rep, f.common, out);
  out << "analyze: " << domain_summary(rep) << "\n";
  return 0;
}

int run_selftest_cmd(const Flags& f, std::ostream& out) {
  int failed = 0;
  for (const CheckResult& r : run_selftest()) {
    failed += r.pass ? 0 : 1;
    if (!f.common.quiet || !r.pass) out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
  }
  out << "selftest: " << (failed == 0 ? "all checks passed" : std::to_string(failed) + " checks failed")
      << " (kernels: " << simd::active().name << ")\n";
  if (failed > 0) throw NumericalError(std::to_string(failed) + " selftest checks failed");
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational geometric-flow toolkit", "geoflow"};
  app.require_subcommand(1, 1);
  Flags f;

  auto* solvate = app.add_subcommand("solvate", "Solvation free energy of a PQR solute");
  add_common(solvate, f.common, true);

  auto* rafts = app.add_subcommand("rafts", "Lipid microdomain formation on a closed surface");
  add_common(rafts, f.common, true);
  rafts->add_option("--mesh", f.mesh, "OFF file or builtin:icosphere:n|geosphere:f|threeatom|sixatom");
  rafts->add_option("--model", f.model, "geodesic or gl")->check(CLI::IsMember({"geodesic", "gl"}));

  auto* localize = app.add_subcommand("localize", "Curvature-driven protein localization on a torus");
  add_common(localize, f.common, true);

  auto* mesh = app.add_subcommand("mesh", "Build or load a surface mesh and print its statistics");
  add_common(mesh, f.common, false);
  mesh->add_option("--mesh", f.mesh, "OFF file or builtin:...")->required();
  mesh->add_option("--out", f.off_out, "Write the mesh as OFF");
  mesh->add_option("--vtk-out", f.common.vtk_out, "Directory for VTK output");

  auto* analyze = app.add_subcommand("analyze", "Domain analysis of a phase field stored in a VTK mesh");
  add_common(analyze, f.common, false);
  analyze->add_option("--input", f.input, "POLYDATA file written by 'rafts --vtk-out'")->required();
  analyze->add_option("--field", f.field, "Point field to analyse (default phi)");
  analyze->add_option("--trace", f.common.trace, "CSV of the domains");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");
  selftest->add_option("--seed", f.common.seed, "Accepted for uniformity; the checks are deterministic");
  selftest->add_flag("--quiet", f.common.quiet, "Print failures and the summary only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "geoflow: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*solvate) return run_solvate(f, out);
    if (*rafts) return run_rafts(f, out);
    if (*localize) return run_localize(f, out);
    if (*mesh) return run_mesh(f, out);
    if (*analyze) return run_analyze(f, out);
    return run_selftest_cmd(f, out);
  } catch (const ConfigError& e) {
    err << "geoflow: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "geoflow: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "geoflow: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "geoflow: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "geoflow: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace geoflow::cli
