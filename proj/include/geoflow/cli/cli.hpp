#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geoflow::cli {

/// Runs `geoflow <subcommand> [flags]` and returns the process exit code: 0 on success,
/// 2 for usage and configuration errors, 3 for numerical failures.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Quick oracle suite, at least one check per numerical module.
std::vector<CheckResult> run_selftest();

}  // namespace geoflow::cli
