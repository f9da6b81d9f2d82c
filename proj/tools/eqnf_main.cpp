// eqnf: normal forms and periodic-point reductions for equivariant maps.

#include "eqnf/commands.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Normal forms and reductions of equivariant map families near a fixed point"};
  std::string command, file, output, format = "text";
  eqnf::CommandOptions opt;
  int order = 0, period = 0;
  double tol = 0.0, radius = 0.0;
  std::string lambda_grid;

  app.add_option("command", command, "decompose | normal-form | reduce | periodic | verify")->required();
  app.add_option("file", file, "problem file, or builtin:<name>")->required();
  auto* o_order = app.add_option("--order", order, "truncation order k");
  auto* o_period = app.add_option("--period", period, "period q");
  auto* o_tol = app.add_option("--tol", tol, "tolerance for residual, normal-form and invariant checks");
  auto* o_radius = app.add_option("--radius", radius, "trust radius for the reduction");
  auto* o_grid = app.add_option("--lambda-grid", lambda_grid, "\"v1;v2;...\" (comma-separated components) or lo:hi:count");
  app.add_option("--output", output, "write the report to this file");
  app.add_option("--format", format, "text | machine")->check(CLI::IsMember({"text", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : eqnf::kExitParse;
  }
  if (*o_order) opt.order = order;
  if (*o_period) opt.period = period;
  if (*o_tol) opt.tol = tol;
  if (*o_radius) opt.radius = radius;
  if (*o_grid) opt.lambda_grid = lambda_grid;

  eqnf::CommandResult result;
  try {
    result = eqnf::run_command(command, eqnf::load_problem(file), opt);
  } catch (const eqnf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == eqnf::ErrorCode::ParseError ? eqnf::kExitParse : eqnf::kExitNumerical;
  }

  const std::string text = eqnf::render(result.report, format);
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return eqnf::kExitParse;
    }
    out << text;
  }
  return result.exit_code;
}
