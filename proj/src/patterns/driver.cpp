#include <cmath>
#include <stdexcept>
#include <string>

#include "geoflow/error.hpp"
#include "geoflow/io/config.hpp"
#include "geoflow/io/rng.hpp"
#include "geoflow/patterns/patterns.hpp"

namespace geoflow::patterns {

PatternRun run_pattern_simulation(const SurfaceMesh& mesh, const PatternParams& p, const PatternRunOptions& opt) {
  p.validate();
  if (!(opt.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(opt.amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");
  if (opt.trace_every < 1) throw std::invalid_argument("trace_every must be at least 1");
  const bool geodesic = opt.model == PatternModel::geodesic;
  if (!geodesic) {
    const double limit = allen_cahn_stable_dt(mesh, p.sigma_gl);
    if (p.dt > limit) {
      throw std::invalid_argument("dt exceeds the explicit Allen-Cahn limit " + std::to_string(limit));
    }
  }
  auto energy = [&](const SurfaceField& phi) {
    return geodesic ? geodesic_energy(mesh, phi, p) : ginzburg_landau_energy(mesh, phi, p.sigma_gl);
  };

  const io::Rng root(opt.seed);
  PatternRun run;
  {
    io::Rng init = root.substream("initial-field");
    run.phi.resize(mesh.vertex_count());
    for (double& v : run.phi) v = init.uniform(-opt.amplitude, opt.amplitude);
    const double mean = core::surface_mean(mesh, run.phi);
    for (double& v : run.phi) v -= mean;
  }
  run.mass0 = core::surface_integral(mesh, run.phi);
  double G = energy(run.phi);
  run.accepted_energy.push_back(G);
  run.accepted_mass.push_back(run.mass0);
  run.trace.push_back({0.0, G, run.mass0});

  PatternParams sp = p;
  double dt = p.dt;
  const double t_stop = opt.t_end * (1.0 - 1e-12);
  while (run.t < t_stop) {
    sp.dt = std::min(dt, opt.t_end - run.t);
    SurfaceField next;
    bool ok = true;
    if (geodesic) {
      StepResult s = cn_interior_step(mesh, run.phi, sp);
      ok = s.converged;
      next = std::move(s.phi);
    } else {
      next = allen_cahn_step(mesh, run.phi, p.sigma_gl, sp.dt);
    }
    double G_next = 0.0;
    if (ok) {
      clamp_conserving(mesh, next, run.mass0);
      G_next = energy(next);
      ok = std::isfinite(G_next) && G_next <= G + 1e-8 * std::abs(G);
    }
    if (!ok) {
      ++run.rejected_steps;
      dt *= 0.5;
      if (dt < p.dt * 1e-6) {
        throw NumericalError("pattern flow stalled at t = " + std::to_string(run.t) + ": no admissible step");
      }
      continue;
    }
    run.phi = std::move(next);
    run.t += sp.dt;
    G = G_next;
    dt = std::min(p.dt, 2.0 * dt);
    ++run.accepted_steps;
    const double mass = core::surface_integral(mesh, run.phi);
    run.accepted_energy.push_back(G);
    run.accepted_mass.push_back(mass);
    if (run.accepted_steps % opt.trace_every == 0 || run.t >= t_stop) run.trace.push_back({run.t, G, mass});
  }

  io::Rng km = root.substream("kmeans");
  run.report = kmeans_domain_analysis(mesh, run.phi, opt.k_clusters, km, opt.k_min, opt.k_max);
  return run;
}

PatternParams pattern_params_from_config(const io::RunConfig& cfg) {
  PatternParams p;
  p.epsilon = cfg.real("pattern.epsilon");
  p.k = cfg.real("pattern.k");
  p.H_c = cfg.real("pattern.H_c");
  p.dt = cfg.real("pattern.dt");
  p.eps_psi = cfg.real("pattern.eps_psi");
  p.max_inner = static_cast<int>(cfg.integer("pattern.max_inner"));
  p.sigma_gl = cfg.real("pattern.sigma_gl");
  p.pcg_tol = cfg.real("pattern.pcg_tol");
  if (cfg.flag("hybrid.enabled")) {
    HybridLipidParams h;
    h.V1 = cfg.real("hybrid.V1");
    h.V2 = cfg.real("hybrid.V2");
    h.w1 = cfg.real("hybrid.w1");
    h.w2 = cfg.real("hybrid.w2");
    h.B = cfg.real("hybrid.B");
    try {
      p.H_c = std::sqrt(2.0) * spontaneous_geodesic_curvature(h);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("hybrid: ") + e.what());
    }
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("pattern: ") + e.what());
  }
  return p;
}

PatternRunOptions pattern_options_from_config(const io::RunConfig& cfg) {
  PatternRunOptions o;
  o.model = cfg.str("pattern.model") == "gl" ? PatternModel::ginzburg_landau : PatternModel::geodesic;
  o.t_end = cfg.real("pattern.t_end");
  o.amplitude = cfg.real("pattern.amplitude");
  o.trace_every = static_cast<int>(cfg.integer("pattern.trace_every"));
  o.k_clusters = static_cast<int>(cfg.integer("analysis.clusters"));
  o.k_min = static_cast<int>(cfg.integer("analysis.k_min"));
  o.k_max = static_cast<int>(cfg.integer("analysis.k_max"));
  o.seed = cfg.seed();
  if (o.k_min < 2 || o.k_max < o.k_min) throw ConfigError("analysis: need 2 <= k_min <= k_max");
  return o;
}

}  // namespace geoflow::patterns
