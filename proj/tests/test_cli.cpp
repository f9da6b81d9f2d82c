#include "doctest.h"
#include "support.hpp"

#include "eqnf/commands.hpp"

#include <cmath>
#include <string>

using namespace eqnf;
using namespace eqnf::testing;

namespace {

std::string corpus(const std::string& name) { return std::string(EQNF_SOURCE_DIR) + "/problems/" + name; }
std::string data(const std::string& name) { return std::string(EQNF_SOURCE_DIR) + "/tests/data/" + name; }

Matrix matrix_of(const Json& j) {
  Matrix m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = j[r][c].get<double>();
  return m;
}

std::string parse_message(const std::string& path) {
  try {
    load_problem(path);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("decompose on the builtin and the constructed corpus") {
  const CommandResult r = run_command("decompose", load_problem("builtin:paper-example"));
  CHECK(r.exit_code == kExitOk);
  CHECK(max_abs(matrix_of(r.report["S0"]) - Matrix::Identity(2, 2)) <= 1e-12);
  CHECK(max_abs(matrix_of(r.report["N0"]) - mat2(2, -2, 2, -2)) <= 1e-12);

  const CommandResult id = run_command("decompose", load_problem(corpus("identity.json")));
  CHECK(id.exit_code == kExitOk);
  CHECK(max_abs(matrix_of(id.report["S"]) - Matrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs(matrix_of(id.report["N"])) == 0.0);

  // A = P (S + N) P^-1 with S = diag(2, 2, -1), N = e_1 e_2^T, P unit upper bidiagonal.
  Matrix p(3, 3), s = Matrix::Zero(3, 3), n = Matrix::Zero(3, 3);
  p << 1, 1, 0, 0, 1, 1, 0, 0, 1;
  s.diagonal() << 2, 2, -1;
  n(0, 1) = 1;
  const CommandResult j3 = run_command("decompose", load_problem(corpus("jordan3.json")));
  CHECK(j3.exit_code == kExitOk);
  CHECK(max_abs(matrix_of(j3.report["S"]) - p * s * p.inverse()) <= 1e-12);
  CHECK(max_abs(matrix_of(j3.report["N"]) - p * n * p.inverse()) <= 1e-12);
  // S0 = S, N0 = S^-1 N since S^-1 N is nilpotent and commutes with S.
  CHECK(max_abs(matrix_of(j3.report["N0"]) - p * s.inverse() * n * p.inverse()) <= 1e-12);
}

TEST_CASE("normal-form report of the builtin at order 2") {
  Problem pr = load_problem(corpus("planar_example.json"));
  const CommandResult r = run_command("normal-form", pr);
  CHECK(r.exit_code == kExitOk);
  const Json& nf = r.report["normal_form"];
  const Json& d2 = nf["degrees"][1];
  CHECK(d2["admissible_dim"] == 1);
  CHECK(d2["free_dim"] == 1);
  // Canonical admissible direction ((x+y)^2, -(x+y)^2).
  const TruncatedMapd adm = map_from_json(d2["admissible_basis"][0], 2, "basis");
  TruncatedMapd expect(2, 2);
  expect.coeff(0, {2, 0}) = 1;
  expect.coeff(0, {1, 1}) = 2;
  expect.coeff(0, {0, 2}) = 1;
  expect.coeff(1, {2, 0}) = -1;
  expect.coeff(1, {1, 1}) = -2;
  expect.coeff(1, {0, 2}) = -1;
  CHECK(max_coeff(adm - expect) <= 1e-12);

  const Json& s = nf["samples"][0];
  CHECK(std::abs(s["admissible_coordinates"][0]["coordinates"][0].get<double>()) <= 1e-9);
  const TruncatedMapd rep = map_from_json(s["representative_transform"], 2, "rep");
  TruncatedMapd c0 = TruncatedMapd::identity(2, 2);
  c0.coeff(0, {2, 0}) = -0.5;
  c0.coeff(1, {0, 2}) = -0.5;
  CHECK(max_coeff(rep - c0) <= 1e-9);
  CHECK(s["representative_residual"].get<double>() <= 1e-9);
}

TEST_CASE("reduce with q = 1 on a linear map is trivial") {
  const CommandResult r = run_command("reduce", load_problem(corpus("linear_q1.json")));
  CHECK(r.exit_code == kExitOk);
  const Json& red = r.report["reduction"];
  CHECK(red["dim_u"] == 2);
  CHECK(red["dim_complement"] == 0);
  const Json& smp = red["samples"][0];
  CHECK(max_abs(matrix_of(smp["reduced_jacobian"]) - mat2(1, 0.5, 0, 1)) <= 1e-12);
  for (const auto& pt : smp["points"]) CHECK(pt["vstar_norm"].get<double>() == 0.0);
}

TEST_CASE("periodic recovers the planted orbits of the corpus file") {
  const CommandResult r = run_command("periodic", load_problem(corpus("planted_q3.json")));
  CHECK(r.exit_code == kExitOk);
  const Json& pts = r.report["periodic"]["points"];
  REQUIRE(pts.size() == 3);
  std::vector<double> radii;
  for (const auto& p : pts) {
    CHECK(p["isolated"].get<bool>());
    radii.push_back(std::hypot(p["u"][0].get<double>(), p["u"][1].get<double>()));
  }
  std::sort(radii.begin(), radii.end());
  const double eps = 0.02, lam = 1e-4;
  CHECK(radii[0] == 0.0);
  CHECK(std::abs(radii[1] - (-eps + std::sqrt(eps * eps + 4 * lam)) / 2) <= 1e-8);
  CHECK(std::abs(radii[2] - (eps + std::sqrt(eps * eps + 4 * lam)) / 2) <= 1e-8);
}

TEST_CASE("the builtin with q = 1 reports a line of fixed points") {
  const CommandResult r = run_command("periodic", load_problem(corpus("planar_example.json")));
  CHECK(r.exit_code == kExitOk);
  int flagged = 0;
  for (const auto& p : r.report["periodic"]["points"]) {
    CHECK(std::abs(p["u"][0].get<double>() - p["u"][1].get<double>()) <= 1e-10);
    flagged += !p["isolated"].get<bool>();
  }
  CHECK(flagged >= 2);
}

TEST_CASE("verify passes on the corpus and fails on a non-equivariant map") {
  for (const char* f : {"planar_example.json", "identity.json", "jordan3.json", "linear_q1.json", "planted_q3.json"}) {
    const CommandResult r = run_command("verify", load_problem(corpus(f)));
    CHECK_MESSAGE(r.exit_code == kExitOk, f);
    CHECK(r.report["failed"] == 0);
  }
  const CommandResult bad = run_command("verify", load_problem(data("not_equivariant.json")));
  CHECK(bad.exit_code == kExitInvariant);
}

TEST_CASE("parse diagnostics") {
  const std::string syntax = parse_message(data("bad_syntax.json"));
  CHECK(syntax.find("bad_syntax.json:5:") != std::string::npos);
  const std::string field = parse_message(data("bad_field.json"));
  CHECK(field.find("map.terms[0].coefficient") != std::string::npos);
  CHECK_FALSE(parse_message(data("bad_group.json")).empty());
  CHECK_FALSE(parse_message(data("missing.json")).empty());
  CHECK_FALSE(parse_message("builtin:nothing").empty());
  CHECK_THROWS_AS(run_command("bogus", load_problem(corpus("identity.json"))), Error);
  CHECK_THROWS_AS(parse_lambda_grid("1;x", 1), Error);
}

TEST_CASE("numerical failures map to exit code 3") {
  const CommandResult r = run_command("decompose", load_problem(data("singular.json")));
  CHECK(r.exit_code == kExitNumerical);
  CHECK(r.report["error"]["code"] == "SingularInput");
}

TEST_CASE("lambda grids") {
  const auto g = parse_lambda_grid("0:1:5", 1);
  REQUIRE(g.size() == 5);
  CHECK(g[2](0) == 0.5);
  const auto h = parse_lambda_grid("1,2;3,4", 2);
  REQUIRE(h.size() == 2);
  CHECK(h[1](0) == 3);
  CHECK(h[1](1) == 4);
}

TEST_CASE("machine output round-trips and is deterministic") {
  const Problem p = load_problem(corpus("planar_example.json"));
  for (const char* cmd : {"decompose", "normal-form", "reduce", "periodic", "verify"}) {
    const std::string a = render(run_command(cmd, p).report, "machine");
    const std::string b = render(run_command(cmd, p).report, "machine");
    CHECK(a == b);
    CHECK(render(Json::parse(a), "machine") == a);
    CHECK(render(run_command(cmd, p).report, "text") == render(Json::parse(a), "text"));
  }
  // Emitted maps re-read to the same coefficients.
  const Json nf = run_command("normal-form", p).report["normal_form"];
  const Json t = nf["samples"][0]["transform"];
  CHECK(map_to_json(map_from_json(t, 2, "t")) == t);
}

TEST_CASE("canonical_basis") {
  Matrix b(3, 2);
  b << 2, 0, 4, 1, 0, 1;
  const Matrix c = canonical_basis(b);
  REQUIRE(c.cols() == 2);
  CHECK(c(0, 0) == doctest::Approx(1));
  CHECK(c(1, 0) == doctest::Approx(0));
  CHECK(c(2, 0) == doctest::Approx(-2));
  CHECK(c(1, 1) == doctest::Approx(1));
  CHECK(c(0, 1) == doctest::Approx(0));
}
