#pragma once

#include "eqnf/problem.hpp"

#include <optional>
#include <string>

namespace eqnf {

/// Command-line overrides of the problem settings.
struct CommandOptions {
  std::optional<int> order;
  std::optional<int> period;
  std::optional<double> tol;  // replaces the residual, normal-form and invariant tolerances
  std::optional<double> radius;
  std::optional<std::string> lambda_grid;
};

enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitParse = 2, kExitNumerical = 3 };

/// Matrix and map coefficients with magnitude below this fraction of
/// max(1, |object|) are printed as 0 so that rounding noise does not change
/// the report.
inline constexpr double kReportCutoff = 1e-13;

struct CommandResult {
  int exit_code = kExitOk;
  Json report;
};

/// Runs decompose | normal-form | reduce | periodic | verify. Numerical
/// failures become exit code 3 with an "error" entry; unknown commands and bad
/// option values are ParseError.
CommandResult run_command(const std::string& command, Problem problem, const CommandOptions& opt = {});

/// "text" or "machine" (indented JSON). Both are deterministic.
std::string render(const Json& report, const std::string& format);

/// Applies the overrides to the problem. Throws ParseError on bad values.
void apply_options(Problem& p, const CommandOptions& opt);

/// Reduced row echelon form of the columns of `basis`: a basis of the same
/// span whose first nonzero entries are 1.
Matrix canonical_basis(const Matrix& basis, double tol = 1e-10);

}  // namespace eqnf
