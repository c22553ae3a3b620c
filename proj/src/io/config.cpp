#include "geoflow/io/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "geoflow/error.hpp"

namespace geoflow::io {
namespace {

ParamSpec real(std::string key, double v, double lo = -1e300, double hi = 1e300, bool lo_open = false,
               bool hi_open = false) {
  return {std::move(key), Kind::real, v, lo, hi, lo_open, hi_open};
}
ParamSpec positive(std::string key, double v) { return real(std::move(key), v, 0.0, 1e300, true); }
ParamSpec nonneg(std::string key, double v) { return real(std::move(key), v, 0.0); }
ParamSpec integer(std::string key, std::int64_t v, double lo, double hi = 1e18) {
  return {std::move(key), Kind::integer, v, lo, hi};
}
ParamSpec text(std::string key, std::string v, std::vector<std::string> choices = {}) {
  ParamSpec p{std::move(key), Kind::string, std::move(v)};
  p.choices = std::move(choices);
  return p;
}
ParamSpec boolean(std::string key, bool v) { return {std::move(key), Kind::boolean, v}; }

void add_common(std::vector<ParamSpec>& s) {
  s.push_back(integer("seed", 1, 0));
  s.push_back(text("output.vtk_dir", ""));
  s.push_back(text("output.trace", ""));
}

std::vector<ParamSpec> solvate_schema() {
  std::vector<ParamSpec> s;
  add_common(s);
  ParamSpec pqr = text("solute.pqr", "");
  pqr.required = true;
  s.push_back(pqr);
  s.push_back(positive("physics.eps_m", 1.0));
  s.push_back(positive("physics.eps_s", 80.0));
  s.push_back(nonneg("physics.gamma", 0.0065));
  s.push_back(nonneg("physics.pressure", 0.0));
  s.push_back(nonneg("physics.rho0", 0.0334));
  s.push_back(positive("physics.kT", 0.5925));
  s.push_back(positive("physics.coulomb", 332.0636));
  s.push_back(real("physics.salt_molar", 0.0, 0.0, 5.0));
  s.push_back(integer("physics.salt_valence", 1, 1, 4));
  s.push_back(positive("physics.boltzmann_clamp", 50.0));
  s.push_back(text("physics.boundary", "coulomb", {"coulomb", "zero"}));
  s.push_back(real("grid.spacing", 0.5, 0.0, 4.0, true));
  s.push_back(real("grid.padding", 8.0, 2.0));
  s.push_back(real("solver.gpbe_tol", 1e-6, 0.0, 1.0, true, true));
  s.push_back(integer("solver.gpbe_max_iter", 60, 1));
  s.push_back(real("solver.pcg_tol", 1e-9, 0.0, 1.0, true, true));
  s.push_back(integer("solver.pcg_max_iter", 20000, 1));
  s.push_back(integer("solver.flow_steps", 50, 1));
  s.push_back(positive("solver.tol_G", 1e-4));
  s.push_back(integer("solver.max_cycles", 200, 1));
  s.push_back(nonneg("solver.dt", 0.0));
  s.push_back(nonneg("solver.eta_scale", 1e-6));
  return s;
}

std::vector<ParamSpec> rafts_schema() {
  std::vector<ParamSpec> s;
  add_common(s);
  s.push_back(text("pattern.mesh", "builtin:icosphere:4"));
  s.push_back(text("pattern.model", "geodesic", {"geodesic", "gl"}));
  s.push_back(positive("pattern.epsilon", 0.1));
  s.push_back(positive("pattern.k", 0.01));
  s.push_back(real("pattern.H_c", 1.0 / 0.3));
  s.push_back(positive("pattern.dt", 1e-3));
  s.push_back(positive("pattern.t_end", 7.0));
  s.push_back(positive("pattern.eps_psi", 1e-6));
  s.push_back(integer("pattern.max_inner", 100, 1));
  s.push_back(positive("pattern.sigma_gl", 0.01));
  s.push_back(real("pattern.amplitude", 0.1, 0.0, 1.0, true));
  s.push_back(real("pattern.pcg_tol", 1e-10, 0.0, 1.0, true, true));
  s.push_back(integer("pattern.trace_every", 1, 1));
  s.push_back(integer("analysis.clusters", 0, 0));
  s.push_back(integer("analysis.k_min", 2, 1));
  s.push_back(integer("analysis.k_max", 12, 1));
  s.push_back(boolean("hybrid.enabled", false));
  s.push_back(positive("hybrid.V1", 0.9));
  s.push_back(positive("hybrid.V2", 0.9));
  s.push_back(positive("hybrid.w1", 0.8));
  s.push_back(positive("hybrid.w2", 0.8));
  s.push_back(nonneg("hybrid.B", 1.0));
  return s;
}

std::vector<ParamSpec> localize_schema() {
  std::vector<ParamSpec> s;
  add_common(s);
  s.push_back(positive("torus.R", 2.0));
  s.push_back(positive("torus.r", 1.1));
  s.push_back(integer("grid.n", 96, 16, 1024));
  s.push_back(positive("grid.half_width", 4.0));
  s.push_back(positive("phase.epsilon", 0.1));
  s.push_back(text("phase.profile", "tanh", {"tanh", "signed_distance"}));
  s.push_back(real("species.C0_pro", 0.5));
  s.push_back(real("species.C0_lip", -0.1));
  s.push_back(nonneg("species.a_pro", 0.0));
  s.push_back(positive("species.a_lip", 1.0));
  s.push_back(positive("species.D", 1.0));
  s.push_back(positive("species.kT", 1.0));
  s.push_back(nonneg("species.drift_strength", 5.0));
  s.push_back(positive("time.dt", 1e-3));
  s.push_back(positive("time.t_end", 5.0));
  s.push_back(positive("time.sample_every", 0.05));
  return s;
}

const ParamSpec* find_spec(Model m, std::string_view key) {
  for (const auto& p : schema(m))
    if (p.key == key) return &p;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string at_line(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

bool parse_double(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

void check_range(const ParamSpec& p, double v, int line) {
  const bool lo_bad = p.lo_open ? !(v > p.lo) : !(v >= p.lo);
  const bool hi_bad = p.hi_open ? !(v < p.hi) : !(v <= p.hi);
  if (lo_bad || hi_bad) {
    std::ostringstream os;
    os << at_line(line) << p.key << " = " << v << " is out of range ";
    os << (p.lo_open ? "(" : "[");
    if (p.lo <= -1e300) os << "-inf"; else os << p.lo;
    os << ", ";
    if (p.hi >= 1e300) os << "inf"; else os << p.hi;
    os << (p.hi_open ? ")" : "]");
    throw ConfigError(os.str());
  }
}

Value coerce(const ParamSpec& p, std::string_view raw, int line) {
  const std::string v = trim(raw);
  auto fail = [&](const char* what) {
    throw ConfigError(at_line(line) + p.key + " expects " + what + ", got '" + v + "'");
  };
  switch (p.kind) {
    case Kind::real: {
      double d;
      if (!parse_double(v, d)) fail("a real number");
      check_range(p, d, line);
      return d;
    }
    case Kind::integer: {
      std::int64_t i = 0;
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
      if (ec != std::errc() || ptr != v.data() + v.size()) fail("an integer");
      check_range(p, static_cast<double>(i), line);
      return i;
    }
    case Kind::string: {
      std::string s = v;
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      if (!p.choices.empty()) {
        bool ok = false;
        for (const auto& c : p.choices) ok = ok || c == s;
        if (!ok) {
          std::string list;
          for (const auto& c : p.choices) list += (list.empty() ? "" : "|") + c;
          throw ConfigError(at_line(line) + p.key + " must be one of " + list + ", got '" + s + "'");
        }
      }
      return s;
    }
    case Kind::vec3: {
      const auto parts = split_list(v);
      Vec3Value out{};
      if (parts.size() != 3) fail("three comma-separated reals");
      for (int a = 0; a < 3; ++a) {
        if (!parse_double(parts[a], out[a])) fail("three comma-separated reals");
        check_range(p, out[a], line);
      }
      return out;
    }
    case Kind::boolean:
      if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
      if (v == "false" || v == "0" || v == "no" || v == "off") return false;
      fail("true or false");
  }
  return {};
}

LjParams parse_lj(std::string_view key, std::string_view raw, int line) {
  const auto parts = split_list(raw);
  LjParams lj;
  if (parts.size() != 2 || !parse_double(parts[0], lj.eps) || !parse_double(parts[1], lj.sigma)) {
    throw ConfigError(at_line(line) + std::string(key) + " expects 'eps, sigma'");
  }
  if (lj.eps < 0.0) throw ConfigError(at_line(line) + std::string(key) + ": eps must be >= 0");
  if (!(lj.sigma > 0.0)) throw ConfigError(at_line(line) + std::string(key) + ": sigma must be > 0");
  return lj;
}

std::string format_real(double d) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_real(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return "\"" + x + "\"";
        } else if constexpr (std::is_same_v<T, Vec3Value>) {
          return format_real(x[0]) + ", " + format_real(x[1]) + ", " + format_real(x[2]);
        } else {
          return x ? "true" : "false";
        }
      },
      v);
}

template <class T>
const T& get(const std::map<std::string, Value, std::less<>>& values, std::string_view key) {
  const auto it = values.find(key);
  if (it == values.end()) throw std::logic_error("config key not in schema: " + std::string(key));
  const T* v = std::get_if<T>(&it->second);
  if (!v) throw std::logic_error("config key has another type: " + std::string(key));
  return *v;
}

}  // namespace

std::string_view model_name(Model m) {
  switch (m) {
    case Model::solvate: return "solvate";
    case Model::rafts: return "rafts";
    case Model::localize: return "localize";
  }
  return "";
}

Model parse_model(std::string_view name) {
  if (name == "solvate") return Model::solvate;
  if (name == "rafts") return Model::rafts;
  if (name == "localize") return Model::localize;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected solvate, rafts or localize)");
}

const std::vector<ParamSpec>& schema(Model m) {
  static const std::vector<ParamSpec> s = solvate_schema();
  static const std::vector<ParamSpec> r = rafts_schema();
  static const std::vector<ParamSpec> l = localize_schema();
  switch (m) {
    case Model::solvate: return s;
    case Model::rafts: return r;
    case Model::localize: return l;
  }
  return s;
}

RunConfig RunConfig::defaults(Model m) {
  RunConfig c;
  c.model_ = m;
  for (const auto& p : schema(m)) c.values_[p.key] = p.fallback;
  if (m == Model::solvate) c.lj_["default"] = LjParams{0.1, 3.0};
  return c;
}

double RunConfig::real(std::string_view key) const { return get<double>(values_, key); }
std::int64_t RunConfig::integer(std::string_view key) const { return get<std::int64_t>(values_, key); }
const std::string& RunConfig::str(std::string_view key) const { return get<std::string>(values_, key); }
Vec3Value RunConfig::vec3(std::string_view key) const { return get<Vec3Value>(values_, key); }
bool RunConfig::flag(std::string_view key) const { return get<bool>(values_, key); }

void RunConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::set(std::string_view key_in, std::string_view value) {
  const std::string key = trim(key_in);
  if (key.starts_with("lj.") && model_ == Model::solvate) {
    lj_[key.substr(3)] = parse_lj(key, value, 0);
    return;
  }
  const ParamSpec* p = find_spec(model_, key);
  if (!p) throw ConfigError("unknown key '" + key + "' for model " + std::string(model_name(model_)));
  values_[key] = coerce(*p, value, 0);
}

LjParams RunConfig::lj_for(std::string_view atom_name) const {
  if (const auto it = lj_.find(std::string(atom_name)); it != lj_.end()) return it->second;
  if (const auto it = lj_.find("default"); it != lj_.end()) return it->second;
  throw ConfigError("no Lennard-Jones parameters for atom '" + std::string(atom_name) + "' and no [lj] default");
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "model = " << model_name(model_) << "\n";
  std::string section;
  for (const auto& p : schema(model_)) {
    const auto dot = p.key.find('.');
    const std::string sec = dot == std::string::npos ? "" : p.key.substr(0, dot);
    const std::string name = dot == std::string::npos ? p.key : p.key.substr(dot + 1);
    if (sec != section) {
      os << "\n[" << sec << "]\n";
      section = sec;
    }
    os << name << " = " << format_value(values_.at(p.key)) << "\n";
  }
  if (!lj_.empty()) {
    os << "\n[lj]\n";
    for (const auto& [name, lj] : lj_) os << name << " = " << format_real(lj.eps) << ", " << format_real(lj.sigma) << "\n";
  }
  return os.str();
}

RunConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::vector<std::pair<std::string, Entry>> entries;
  std::unordered_map<std::string, int> seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError(at_line(line_no) + "malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(at_line(line_no) + "expected 'key = value'");
    const std::string name = trim(std::string_view(line).substr(0, eq));
    if (name.empty()) throw ConfigError(at_line(line_no) + "missing key before '='");
    const std::string key = section.empty() ? name : section + "." + name;
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ConfigError("duplicate key '" + key + "' on lines " + std::to_string(it->second) + " and " +
                        std::to_string(line_no));
    }
    seen.emplace(key, line_no);
    entries.push_back({key, {trim(std::string_view(line).substr(eq + 1)), line_no}});
  }

  const auto model_it = seen.find("model");
  if (model_it == seen.end()) throw ConfigError("missing required key 'model'");
  Model model{};
  for (const auto& [key, e] : entries) {
    if (key == "model") {
      try {
        model = parse_model(e.value);
      } catch (const ConfigError& err) {
        throw ConfigError(at_line(e.line) + err.what());
      }
    }
  }
  RunConfig cfg = RunConfig::defaults(model);
  cfg.lj_.clear();
  for (const auto& [key, e] : entries) {
    if (key == "model") continue;
    if (key.starts_with("lj.") && model == Model::solvate) {
      cfg.lj_[key.substr(3)] = parse_lj(key, e.value, e.line);
      continue;
    }
    const ParamSpec* p = find_spec(model, key);
    if (!p) throw ConfigError(at_line(e.line) + "unknown key '" + key + "' for model " + std::string(model_name(model)));
    cfg.values_[key] = coerce(*p, e.value, e.line);
  }
  for (const auto& p : schema(model)) {
    if (p.required && !seen.contains(p.key)) throw ConfigError("missing required key '" + p.key + "'");
  }
  if (model == Model::solvate && cfg.lj_.empty()) cfg.lj_["default"] = LjParams{0.1, 3.0};
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace geoflow::io
