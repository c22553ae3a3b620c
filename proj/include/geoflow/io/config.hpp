#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace geoflow::io {

enum class Model { solvate, rafts, localize };

std::string_view model_name(Model m);
/// Throws ConfigError for anything but "solvate", "rafts" or "localize".
Model parse_model(std::string_view name);

using Vec3Value = std::array<double, 3>;
using Value = std::variant<double, std::int64_t, std::string, Vec3Value, bool>;

enum class Kind { real, integer, string, vec3, boolean };

/// One typed key of a model schema. Numeric bounds apply to reals and integers
/// (and componentwise to 3-vectors); `choices` restricts strings when non-empty.
struct ParamSpec {
  std::string key;  // "section.name"
  Kind kind;
  Value fallback;
  double lo = -1e300;
  double hi = 1e300;
  bool lo_open = false;
  bool hi_open = false;
  bool required = false;
  std::vector<std::string> choices{};
};

const std::vector<ParamSpec>& schema(Model m);

/// Lennard-Jones well depth (kcal/mol) and sigma (Angstrom).
struct LjParams {
  double eps = 0.0;
  double sigma = 1.0;
  bool operator==(const LjParams&) const = default;
};

/// Parsed, validated run configuration. Every schema key holds a value (defaults
/// filled in), so accessors only fail on programming errors.
class RunConfig {
 public:
  static RunConfig defaults(Model m);

  Model model() const { return model_; }

  double real(std::string_view key) const;
  std::int64_t integer(std::string_view key) const;
  const std::string& str(std::string_view key) const;
  Vec3Value vec3(std::string_view key) const;
  bool flag(std::string_view key) const;

  std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("seed")); }

  /// Applies "section.key=value" with the same coercion and range checks as the file
  /// parser. Keys under "lj." add or replace a Lennard-Jones entry.
  void set(std::string_view assignment);
  void set(std::string_view key, std::string_view value);

  /// LJ table keyed by atom name; falls back to the "default" entry.
  LjParams lj_for(std::string_view atom_name) const;
  const std::map<std::string, LjParams>& lj_table() const { return lj_; }

  const std::map<std::string, Value, std::less<>>& values() const { return values_; }

  /// Text that parse_config maps back to an equal RunConfig.
  std::string serialize() const;

  bool operator==(const RunConfig&) const = default;

 private:
  friend RunConfig parse_config(std::string_view text);
  Model model_ = Model::solvate;
  std::map<std::string, Value, std::less<>> values_;
  std::map<std::string, LjParams> lj_;
};

/// Sectioned "key = value" text with "[section]" headers and "#" comments. Top-level
/// keys are "model" (required) and "seed". Errors are ConfigError with the line number.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

}  // namespace geoflow::io
