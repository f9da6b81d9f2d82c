#pragma once

#include "eqnf/family.hpp"
#include "eqnf/group.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace eqnf {

using Json = nlohmann::ordered_json;

struct Tolerances {
  double residual = 1e-10;   // decomposition and lift identities, relative to max(1, |A|)
  double normal_form = 1e-9;  // normal-form residual and exponent identities
  double invariant = 1e-8;   // reduction identities at sampled points
  double rank = 1e-9;        // subspace rank cut-off
};

/// A system to analyse: a map family about a fixed point at the origin, its
/// symmetry group, and run settings.
struct Problem {
  std::string name;
  int n = 0;
  int m = 1;
  std::string builtin;  // empty for coefficient tables
  MapFamily family;
  std::vector<Vector> samples;  // parameter values used for linearization and normal forms
  GroupData group;
  int period = 1;
  int order = 2;
  std::string form = "nilpotent";  // or "semisimple"
  Tolerances tol;
  double radius = 0.1;
  double box = 0.05;
  int grid = 5;
  std::vector<Vector> lambda_grid;

  /// Linear part at the first sample.
  Matrix a0() const { return family.linear_part(samples.front()); }
};

/// Parses a JSON problem description. Errors are ParseError with the line
/// number or the offending field path in the message.
Problem parse_problem(const std::string& text, const std::string& origin = "<input>");

/// Reads a file, or a builtin given as "builtin:<name>".
Problem load_problem(const std::string& path);

/// Builtin problem by name; currently "paper-example".
Problem builtin_problem(const std::string& name);

/// Parameter grid "v1;v2;..." with comma-separated components, or
/// "lo:hi:count" for a scalar parameter.
std::vector<Vector> parse_lambda_grid(const std::string& spec, int m);

/// Term list {"component", "exponent", "coefficient"} for the nonzero
/// coefficients of a map; entries below `cutoff` (relative to max(1, |f|)) are
/// dropped.
Json map_to_json(const TruncatedMapd& f, double cutoff = 0.0);
TruncatedMapd map_from_json(const Json& j, int n, const std::string& where);

Json matrix_to_json(const Matrix& m, double cutoff = 0.0);
Json vector_to_json(const Vector& v, double cutoff = 0.0);

}  // namespace eqnf
