#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fraclat::cli {

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kUsageError = 2 };

/// Dispatches `fraclat <subcommand> ...`; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidateOptions {
  std::optional<std::string> only;  ///< lattice, spectral, semigroup, model, nehari or cli
  bool wrong_sign_kernel = false;   ///< negate every kernel used by the spectral checks
};

std::vector<CheckResult> run_validation(const ValidateOptions& opts);
std::string validation_json(const std::vector<CheckResult>& results);
void print_validation_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace fraclat::cli
