#include "eqnf/commands.hpp"

#include "eqnf/normalform.hpp"
#include "eqnf/reduction.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace eqnf {

namespace {

double scale_of(const Matrix& m) { return std::max(1.0, max_abs(m)); }

Json number_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

// One layer of degree j as a standalone map, for printing bases.
TruncatedMapd layer_map(int n, int j, const Vector& v) {
  TruncatedMapd f(n, j);
  f.set_layer_vector(j, v);
  return f;
}

Json basis_json(int n, int j, const Matrix& basis) {
  Json out = Json::array();
  const Matrix c = canonical_basis(basis);
  for (Eigen::Index i = 0; i < c.cols(); ++i) out.push_back(map_to_json(layer_map(n, j, c.col(i)), kReportCutoff));
  return out;
}

Vector least_squares(const Matrix& basis, const Vector& v) {
  if (basis.cols() == 0) return Vector(0);
  return basis.colPivHouseholderQr().solve(v);
}

// Removes from v the components along `free` by zeroing, for each direction,
// the entry of largest magnitude (full pivoting, first index on ties).
Vector zero_free_pivots(Vector v, Matrix free) {
  std::vector<bool> used(free.cols(), false);
  for (Eigen::Index step = 0; step < free.cols(); ++step) {
    Eigen::Index pr = -1, pc = -1;
    double best = 0.0;
    for (Eigen::Index c = 0; c < free.cols(); ++c) {
      if (used[c]) continue;
      for (Eigen::Index r = 0; r < free.rows(); ++r) {
        if (std::abs(free(r, c)) > best * (1 + 1e-12)) {
          best = std::abs(free(r, c));
          pr = r;
          pc = c;
        }
      }
    }
    if (pc < 0 || best <= 1e-12) break;
    used[pc] = true;
    free.col(pc) /= free(pr, pc);
    for (Eigen::Index c = 0; c < free.cols(); ++c)
      if (c != pc) free.col(c) -= free(pr, c) * free.col(pc);
    v -= v(pr) * free.col(pc);
  }
  return v;
}

struct Check {
  std::string name;
  double value;
  double tol;
};

Json check_json(const Check& c) {
  Json j = Json::object();
  j["name"] = c.name;
  j["value"] = number_json(c.value);
  j["tol"] = c.tol;
  j["pass"] = std::isfinite(c.value) && c.value <= c.tol;
  return j;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!(std::isfinite(c.value) && c.value <= c.tol)) return false;
  return true;
}

Json checks_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(check_json(c));
  return out;
}

Json header(const std::string& command, const Problem& p) {
  Json j = Json::object();
  j["command"] = command;
  j["problem"] = p.name;
  j["dimension"] = p.n;
  j["parameters"] = p.m;
  j["group_order"] = p.group.order();
  return j;
}

// ----- decompose -----

struct Decomposition {
  Matrix a, s, nil, s0, n0;
  std::vector<Check> checks;
};

Decomposition decompose(const Problem& p) {
  Decomposition d;
  d.a = p.a0();
  const JCDecomposition jc = jordan_chevalley(d.a);
  const SUDecomposition su = su_decomposition(d.a);
  d.s = jc.semisimple;
  d.nil = jc.nilpotent;
  d.s0 = su.semisimple;
  d.n0 = su.nil_log;
  const double sc = scale_of(d.a);
  const double tol = p.tol.residual;
  const auto n = d.a.rows();
  d.checks = {
      {"jc_sum", max_abs(d.s + d.nil - d.a) / sc, tol},
      {"jc_commute", max_abs(d.s * d.nil - d.nil * d.s) / (sc * sc), tol},
      {"jc_nilpotent", max_abs(matrix_power(d.nil, static_cast<int>(n))) / std::pow(sc, static_cast<double>(n)), tol},
      {"su_product", max_abs(d.s0 * matrix_exp(d.n0) - d.a) / sc, tol},
      {"su_commute", max_abs(d.s0 * d.n0 - d.n0 * d.s0) / sc, tol},
      {"su_nilpotent", max_abs(matrix_power(d.n0, static_cast<int>(n))), tol},
  };
  return d;
}

CommandResult cmd_decompose(const Problem& p) {
  const Decomposition d = decompose(p);
  CommandResult r;
  r.report = header("decompose", p);
  r.report["lambda"] = vector_to_json(p.samples.front(), kReportCutoff);
  r.report["A"] = matrix_to_json(d.a, kReportCutoff);
  r.report["S"] = matrix_to_json(d.s, kReportCutoff);
  r.report["N"] = matrix_to_json(d.nil, kReportCutoff);
  r.report["S0"] = matrix_to_json(d.s0, kReportCutoff);
  r.report["N0"] = matrix_to_json(d.n0, kReportCutoff);
  r.report["semisimple"] = max_abs(d.nil) <= p.tol.residual * scale_of(d.a);
  r.report["residuals"] = checks_json(d.checks);
  r.exit_code = all_pass(d.checks) ? kExitOk : kExitInvariant;
  return r;
}

// ----- normal form -----

NormalFormResult compute_nf(const Problem& p, int k) {
  const MapSamples psi = sample_jets(p.family, p.samples, k);
  const Matrix a0 = p.a0();
  NormalFormOptions opt;
  opt.rank_tol = p.tol.rank;
  if (p.form == "semisimple") {
    const SUDecomposition su = su_decomposition(a0);
    return semisimple_nf(psi, a0, p.group, invariant_inner_product(su.semisimple, p.group), k, opt);
  }
  return nilpotent_nf(psi, a0, p.group, k, opt);
}

// The transform with the free directions of every degree removed, written as
// exp(Y) o T1 with Y the logarithm of the near-identity part.
TruncatedMapd representative_transform(const NormalFormResult& nf, const NormalFormSample& s, int k,
                                       std::vector<Vector>& free_coords) {
  const TruncatedMapd t1inv = TruncatedMapd::linear(s.linear_transform.inverse(), k);
  TruncatedMapd y = log_map(compose(s.transform, t1inv, k), k);
  free_coords.clear();
  for (int j = 2; j <= k; ++j) {
    const Matrix& free = nf.degrees[j - 1].free_directions;
    const Vector layer = y.layer_vector(j);
    const Vector rep = zero_free_pivots(layer, free);
    free_coords.push_back(least_squares(canonical_basis(free), layer - rep));
    y.set_layer_vector(j, rep);
  }
  return compose(exp_vf(y, k), TruncatedMapd::linear(s.linear_transform, k), k);
}

Json nf_report(const Problem& p, const NormalFormResult& nf, int k, std::vector<Check>& checks) {
  Json j = Json::object();
  j["form"] = nf.nilpotent ? "nilpotent" : "semisimple";
  j["order"] = k;
  j["S0"] = matrix_to_json(nf.s0, kReportCutoff);
  j["N0"] = matrix_to_json(nf.n0, kReportCutoff);
  Json degrees = Json::array();
  for (const DegreeInfo& d : nf.degrees) {
    Json dj = Json::object();
    dj["degree"] = d.degree;
    dj["codomain_dim"] = d.codomain.cols();
    dj["admissible_dim"] = d.admissible.cols();
    dj["removable_dim"] = d.removable.cols();
    dj["transform_dim"] = d.domain.cols();
    dj["free_dim"] = d.free_directions.cols();
    dj["homological_condition"] = number_json(d.homological_condition);
    dj["formula_discrepancy"] = number_json(d.formula_discrepancy);
    if (d.degree >= 2) {
      dj["admissible_basis"] = basis_json(p.n, d.degree, d.admissible);
      dj["free_basis"] = basis_json(p.n, d.degree, d.free_directions);
    }
    degrees.push_back(dj);
  }
  j["degrees"] = degrees;

  const double tol = p.tol.normal_form;
  Json samples = Json::array();
  for (std::size_t i = 0; i < nf.samples.size(); ++i) {
    const NormalFormSample& s = nf.samples[i];
    const std::string tag = "sample" + std::to_string(i) + ".";
    Json sj = Json::object();
    sj["lambda"] = vector_to_json(s.lambda, kReportCutoff);
    sj["linear_transform"] = matrix_to_json(s.linear_transform, kReportCutoff);
    sj["exponent"] = map_to_json(s.exponent, kReportCutoff);
    Json coords = Json::array();
    for (int deg = 2; deg <= k; ++deg) {
      const Matrix basis = canonical_basis(nf.degrees[deg - 1].admissible);
      Json cj = Json::object();
      cj["degree"] = deg;
      cj["coordinates"] = vector_to_json(least_squares(basis, s.exponent.layer_vector(deg)), kReportCutoff);
      coords.push_back(cj);
    }
    sj["admissible_coordinates"] = coords;
    sj["transform"] = map_to_json(s.transform, kReportCutoff);

    std::vector<Vector> free_coords;
    const TruncatedMapd rep = representative_transform(nf, s, k, free_coords);
    const TruncatedMapd jet = p.family.jet(s.lambda, k);
    const double rep_res = max_coeff(ad_conjugate(rep, jet, k) - nf.base() * exp_vf(nf.full_exponent(i), k));
    Json fc = Json::array();
    for (int deg = 2; deg <= k; ++deg) {
      Json cj = Json::object();
      cj["degree"] = deg;
      cj["coordinates"] = vector_to_json(free_coords[deg - 2], kReportCutoff);
      fc.push_back(cj);
    }
    sj["transform_free_coordinates"] = fc;
    sj["representative_transform"] = map_to_json(rep, kReportCutoff);
    sj["representative_residual"] = rep_res;
    sj["residual"] = s.residual;
    sj["normal_form_defect"] = s.normal_form_defect;
    sj["codomain_defect"] = s.codomain_defect;
    samples.push_back(sj);
    checks.push_back({tag + "nf_residual", s.residual, tol});
    checks.push_back({tag + "nf_defect", s.normal_form_defect, tol});
    checks.push_back({tag + "codomain_defect", s.codomain_defect, tol});
  }
  j["samples"] = samples;
  return j;
}

std::vector<Check> exponent_checks(const Problem& p, const NormalFormResult& nf) {
  std::vector<Check> out;
  const double tol = p.tol.normal_form;
  for (std::size_t i = 0; i < nf.samples.size(); ++i) {
    const ExponentChecks e = check_exponent(nf, p.group, i);
    const std::string tag = "sample" + std::to_string(i) + ".";
    out.push_back({tag + "exponent_jet", e.jet, tol});
    out.push_back({tag + "exponent_commutes_s0", e.commutes_s0, tol});
    if (nf.nilpotent) out.push_back({tag + "exponent_adjoint_kernel", e.adjoint_kernel, tol});
    out.push_back({tag + "exponent_equivariance", e.equivariance, tol});
    out.push_back({tag + "transform_equivariance", e.transform_equivariance, tol});
  }
  return out;
}

CommandResult cmd_normal_form(const Problem& p) {
  const NormalFormResult nf = compute_nf(p, p.order);
  std::vector<Check> checks;
  CommandResult r;
  r.report = header("normal-form", p);
  r.report["normal_form"] = nf_report(p, nf, p.order, checks);
  const std::vector<Check> ex = exponent_checks(p, nf);
  checks.insert(checks.end(), ex.begin(), ex.end());
  r.report["checks"] = checks_json(checks);
  r.exit_code = all_pass(checks) ? kExitOk : kExitInvariant;
  return r;
}

// ----- reduction -----

LiftContext lift_for(const Problem& p) {
  const Matrix a0 = p.a0();
  return build_lift(a0, su_decomposition(a0).semisimple, p.group, p.period);
}

ReductionOptions reduction_options(const Problem& p) {
  ReductionOptions o;
  o.radius = p.radius;
  return o;
}

// Deterministic sample points in U: basis directions, their sum and an
// alternating combination, at two radii below min(1e-2, radius / 2).
std::vector<Vector> sample_points(const LiftContext& ctx, double radius) {
  std::vector<Vector> pts;
  const Eigen::Index d = ctx.dim_u();
  if (d == 0) return pts;
  std::vector<Vector> dirs;
  for (Eigen::Index i = 0; i < d; ++i) dirs.push_back(ctx.u_basis.col(i));
  if (d > 1) {
    Vector sum = Vector::Zero(ctx.n), alt = Vector::Zero(ctx.n);
    for (Eigen::Index i = 0; i < d; ++i) {
      sum += ctx.u_basis.col(i);
      alt += (i % 2 ? -0.5 : 1.0) * ctx.u_basis.col(i);
    }
    dirs.push_back(sum.normalized());
    dirs.push_back(alt.normalized());
  }
  const double rmax = std::min(1e-2, 0.5 * radius);
  for (double r : {0.1 * rmax, rmax})
    for (const auto& v : dirs) pts.push_back(r * v);
  return pts;
}

std::vector<Check> lift_checks(const Problem& p, const LiftContext& ctx) {
  const LiftReport lr = lift_report(ctx);
  const double tol = p.tol.residual;
  return {{"lift_sigma_period", lr.sigma_period, tol}, {"lift_g_sigma", lr.g_sigma, tol},
          {"lift_representation", lr.representation, tol}, {"lift_sigma_s0", lr.sigma_s0, tol},
          {"lift_xi_shift", lr.xi_shift, tol}, {"lift_xi_a0", lr.xi_a0, tol}, {"lift_xi_g", lr.xi_g, tol}};
}

Json reduce_report(const Problem& p, const LiftContext& ctx, std::vector<Check>& checks) {
  const ReductionOptions ro = reduction_options(p);
  Json j = Json::object();
  j["period"] = ctx.q;
  j["dim_u"] = ctx.dim_u();
  j["dim_y"] = ctx.dim_y();
  j["dim_complement"] = ctx.complement.cols();
  j["u_basis"] = matrix_to_json(canonical_basis(ctx.u_basis), kReportCutoff);
  const std::vector<Check> lc = lift_checks(p, ctx);
  checks.insert(checks.end(), lc.begin(), lc.end());

  const Matrix ucanon = canonical_basis(ctx.u_basis);
  const double tol = p.tol.invariant;
  Json per_lambda = Json::array();
  for (std::size_t li = 0; li < p.lambda_grid.size(); ++li) {
    const Vector& lam = p.lambda_grid[li];
    const std::string tag = "lambda" + std::to_string(li) + ".";
    Json lj = Json::object();
    lj["lambda"] = vector_to_json(lam, kReportCutoff);
    if (ctx.dim_u() > 0) {
      // Jacobian of psi_r at 0 in the coordinates of the printed basis.
      const Matrix jac = reduced_jacobian(p.family, ctx, Vector::Zero(ctx.n), lam, ro);
      const Matrix change = ctx.u_basis.transpose() * ucanon;
      lj["reduced_jacobian"] = matrix_to_json(change.inverse() * jac * change, kReportCutoff);
    }
    Json pts = Json::array();
    ReductionInvariants worst;
    double vstar_res = 0.0;
    for (const Vector& u : sample_points(ctx, p.radius)) {
      const VStar vs = solve_vstar(p.family, ctx, u, lam, ro);
      vstar_res = std::max(vstar_res, vs.residual);
      const ReductionInvariants inv = reduction_invariants(p.family, ctx, u, lam, ro);
      worst.reduced_s0 = std::max(worst.reduced_s0, inv.reduced_s0);
      worst.reduced_group = std::max(worst.reduced_group, inv.reduced_group);
      worst.bifurcation_s0 = std::max(worst.bifurcation_s0, inv.bifurcation_s0);
      worst.bifurcation_group = std::max(worst.bifurcation_group, inv.bifurcation_group);
      worst.vstar_shift = std::max(worst.vstar_shift, inv.vstar_shift);
      worst.ghat_vstar = std::max(worst.ghat_vstar, inv.ghat_vstar);
      worst.origin = std::max(worst.origin, inv.origin);
      Json pj = Json::object();
      pj["u"] = vector_to_json(u, kReportCutoff);
      pj["reduced"] = vector_to_json(reduced_map(p.family, ctx, u, lam, ro), kReportCutoff);
      pj["vstar_norm"] = vs.v.norm();
      pj["bifurcation"] = vector_to_json(bifurcation_fn(p.family, ctx, u, lam, ro), kReportCutoff);
      pts.push_back(pj);
    }
    lj["points"] = pts;
    const std::vector<Check> lc2 = {
        {tag + "vstar_residual", vstar_res, tol},
        {tag + "reduced_s0", worst.reduced_s0, tol},
        {tag + "reduced_group", worst.reduced_group, tol},
        {tag + "bifurcation_s0", worst.bifurcation_s0, tol},
        {tag + "bifurcation_group", worst.bifurcation_group, tol},
        {tag + "vstar_shift", worst.vstar_shift, tol},
        {tag + "ghat_vstar", worst.ghat_vstar, tol},
        {tag + "reduced_origin", worst.origin, tol},
    };
    checks.insert(checks.end(), lc2.begin(), lc2.end());
    per_lambda.push_back(lj);
  }
  j["samples"] = per_lambda;
  return j;
}

CommandResult cmd_reduce(const Problem& p) {
  const LiftContext ctx = lift_for(p);
  std::vector<Check> checks;
  CommandResult r;
  r.report = header("reduce", p);
  r.report["reduction"] = reduce_report(p, ctx, checks);
  r.report["checks"] = checks_json(checks);
  r.exit_code = all_pass(checks) ? kExitOk : kExitInvariant;
  return r;
}

// ----- periodic -----

Json periodic_table(const Problem& p, const LiftContext& ctx, std::vector<Check>& checks) {
  PeriodicOptions po;
  po.box = p.box;
  po.grid = p.grid;
  po.reduction = reduction_options(p);
  const auto pts = find_periodic(p.family, ctx, p.lambda_grid, po);
  Json rows = Json::array();
  double worst_period = 0.0, worst_det = 0.0;
  for (const PeriodicPoint& pt : pts) {
    Json row = Json::object();
    row["lambda"] = vector_to_json(pt.lambda, kReportCutoff);
    row["orbit"] = pt.orbit_id;
    row["u"] = vector_to_json(pt.u, kReportCutoff);
    row["x"] = vector_to_json(pt.x, kReportCutoff);
    row["isolated"] = pt.isolated;
    row["nullity"] = pt.nullity;
    row["determining_residual"] = pt.determining_residual;
    row["periodicity_residual"] = pt.periodicity_residual;
    row["bifurcation_residual"] = pt.bifurcation_residual;
    rows.push_back(row);
    worst_period = std::max(worst_period, pt.periodicity_residual);
    worst_det = std::max(worst_det, pt.determining_residual);
  }
  checks.push_back({"periodic_points_periodicity", worst_period, p.tol.invariant});
  checks.push_back({"periodic_points_determining", worst_det, p.tol.invariant});
  Json j = Json::object();
  j["period"] = ctx.q;
  j["box"] = p.box;
  j["grid"] = p.grid;
  j["count"] = pts.size();
  j["points"] = rows;
  return j;
}

CommandResult cmd_periodic(const Problem& p) {
  const LiftContext ctx = lift_for(p);
  std::vector<Check> checks;
  CommandResult r;
  r.report = header("periodic", p);
  r.report["periodic"] = periodic_table(p, ctx, checks);
  r.report["checks"] = checks_json(checks);
  r.exit_code = all_pass(checks) ? kExitOk : kExitInvariant;
  return r;
}

// ----- verify -----

std::vector<Check> group_checks(const Problem& p) {
  GroupData gd = p.group;
  const GroupReport gr = validate_group(gd);
  std::vector<Check> out = {{"group_valid", static_cast<double>(gr.violations.size()), 0.0}};
  const double tol = p.tol.residual;
  const Matrix pchi = projection_operator(p.group, p.group.chi);
  out.push_back({"projection_idempotent", max_abs(pchi * pchi - pchi), tol});
  double orth = 0.0;
  for (const Character& alpha : enumerate_characters(p.group)) {
    if (alpha == p.group.chi) continue;
    orth = std::max(orth, max_abs(pchi * projection_operator(p.group, alpha)));
  }
  out.push_back({"projection_orthogonal", orth, tol});
  return out;
}

std::vector<Check> inner_product_checks(const Problem& p, const Matrix& s0) {
  const AdaptedInnerProduct ip = invariant_inner_product(s0, p.group);
  const Matrix s0s = adjoint_wrt(ip, s0);
  const double tol = p.tol.residual;
  const auto n = s0.rows();
  double orth = 0.0, rev = 0.0;
  for (std::size_t i = 0; i < p.group.order(); ++i) {
    const Matrix& g = p.group.elements[i];
    orth = std::max(orth, max_abs(adjoint_wrt(ip, g) * g - Matrix::Identity(n, n)));
    const Matrix side = p.group.chi[i] > 0 ? s0s : Matrix(s0s.inverse());
    rev = std::max(rev, max_abs(g * s0s - side * g));
  }
  return {{"inner_product_normal", max_abs(s0 * s0s - s0s * s0) / scale_of(s0), tol},
          {"inner_product_orthogonal", orth, tol},
          {"inner_product_reversing", rev / scale_of(s0), tol}};
}

CommandResult cmd_verify(const Problem& p) {
  std::vector<Check> checks = group_checks(p);
  const double tol = p.tol.normal_form;
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const TruncatedMapd jet = p.family.jet(p.samples[i], p.order);
    checks.push_back({"sample" + std::to_string(i) + ".map_equivariance",
                      chi_equivariance_defect(jet, p.group, p.order) / std::max(1.0, max_coeff(jet)), tol});
  }
  const Decomposition d = decompose(p);
  checks.insert(checks.end(), d.checks.begin(), d.checks.end());
  const std::vector<Check> ipc = inner_product_checks(p, d.s0);
  checks.insert(checks.end(), ipc.begin(), ipc.end());

  const NormalFormResult nf = compute_nf(p, p.order);
  std::vector<Check> nfc;
  Json nfj = nf_report(p, nf, p.order, nfc);
  checks.insert(checks.end(), nfc.begin(), nfc.end());
  const std::vector<Check> ex = exponent_checks(p, nf);
  checks.insert(checks.end(), ex.begin(), ex.end());

  const LiftContext ctx = lift_for(p);
  std::vector<Check> rc;
  (void)reduce_report(p, ctx, rc);
  checks.insert(checks.end(), rc.begin(), rc.end());
  std::vector<Check> pc;
  (void)periodic_table(p, ctx, pc);
  checks.insert(checks.end(), pc.begin(), pc.end());

  CommandResult r;
  r.report = header("verify", p);
  r.report["order"] = p.order;
  r.report["period"] = p.period;
  r.report["checks"] = checks_json(checks);
  int failed = 0;
  for (const auto& c : checks) failed += !(std::isfinite(c.value) && c.value <= c.tol);
  r.report["failed"] = failed;
  r.report["passed"] = static_cast<int>(checks.size()) - failed;
  r.exit_code = failed ? kExitInvariant : kExitOk;
  return r;
}

// ----- text rendering -----

std::string format_number(const Json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
  return buf;
}

std::string scalar_text(const Json& v) {
  if (v.is_number()) return format_number(v);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return "null";
}

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

bool is_flat(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v)
    if (!is_scalar(e)) return false;
  return true;
}

std::string flat_text(const Json& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
  return s + "]";
}

void render_value(std::ostringstream& os, const std::string& key, const Json& v, int indent);

void render_object(std::ostringstream& os, const Json& obj, int indent) {
  for (const auto& [k, v] : obj.items()) render_value(os, k, v, indent);
}

void render_value(std::ostringstream& os, const std::string& key, const Json& v, int indent) {
  const std::string pad(indent, ' ');
  if (is_scalar(v)) {
    os << pad << key << ": " << scalar_text(v) << "\n";
  } else if (is_flat(v)) {
    os << pad << key << ": " << flat_text(v) << "\n";
  } else if (v.is_object()) {
    os << pad << key << ":\n";
    render_object(os, v, indent + 2);
  } else {
    os << pad << key << ":\n";
    for (const auto& e : v) {
      if (is_scalar(e) || is_flat(e)) {
        os << pad << "  " << (is_scalar(e) ? scalar_text(e) : flat_text(e)) << "\n";
      } else if (e.is_object()) {
        // Polynomial terms and check rows print on one line.
        if (e.size() == 3 && e.contains("component") && e.contains("exponent") && e.contains("coefficient")) {
          os << pad << "  x" << scalar_text(e["component"]) << " " << flat_text(e["exponent"]) << ": "
             << scalar_text(e["coefficient"]) << "\n";
          continue;
        }
        if (e.contains("name") && e.contains("pass") && e.size() == 4) {
          os << pad << "  " << (e["pass"].get<bool>() ? "ok   " : "FAIL ") << scalar_text(e["name"]) << " = "
             << scalar_text(e["value"]) << " (tol " << scalar_text(e["tol"]) << ")\n";
          continue;
        }
        os << pad << "  -\n";
        render_object(os, e, indent + 4);
      } else {
        render_value(os, "-", e, indent + 2);
      }
    }
  }
}

}  // namespace

Matrix canonical_basis(const Matrix& basis, double tol) {
  Matrix m = basis.transpose();
  const double sc = std::max(1e-300, max_abs(m));
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < m.cols() && rank < m.rows(); ++c) {
    Eigen::Index piv;
    const double best = m.col(c).tail(m.rows() - rank).cwiseAbs().maxCoeff(&piv);
    if (best <= tol * sc) continue;
    piv += rank;
    m.row(rank).swap(m.row(piv));
    m.row(rank) /= m(rank, c);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != rank) m.row(r) -= m(r, c) * m.row(rank);
    ++rank;
  }
  return m.topRows(rank).transpose();
}

void apply_options(Problem& p, const CommandOptions& opt) {
  if (opt.order) {
    if (*opt.order < 1) throw Error(ErrorCode::ParseError, "--order must be at least 1");
    p.order = *opt.order;
  }
  if (opt.period) {
    if (*opt.period < 1) throw Error(ErrorCode::ParseError, "--period must be at least 1");
    p.period = *opt.period;
  }
  if (opt.tol) {
    if (!(*opt.tol > 0)) throw Error(ErrorCode::ParseError, "--tol must be positive");
    p.tol.residual = p.tol.normal_form = p.tol.invariant = *opt.tol;
  }
  if (opt.radius) {
    if (!(*opt.radius > 0)) throw Error(ErrorCode::ParseError, "--radius must be positive");
    p.radius = *opt.radius;
  }
  if (opt.lambda_grid) p.lambda_grid = parse_lambda_grid(*opt.lambda_grid, p.m);
}

CommandResult run_command(const std::string& command, Problem problem, const CommandOptions& opt) {
  static const std::map<std::string, std::function<CommandResult(const Problem&)>> table = {
      {"decompose", cmd_decompose}, {"normal-form", cmd_normal_form}, {"reduce", cmd_reduce},
      {"periodic", cmd_periodic},   {"verify", cmd_verify},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw Error(ErrorCode::ParseError, "unknown command '" + command + "'");
  apply_options(problem, opt);
  try {
    return it->second(problem);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    CommandResult r;
    r.exit_code = kExitNumerical;
    r.report = header(command, problem);
    Json err = Json::object();
    err["code"] = to_string(e.code());
    err["message"] = e.what();
    r.report["error"] = err;
    return r;
  }
}

std::string render(const Json& report, const std::string& format) {
  if (format == "machine") return report.dump(2) + "\n";
  if (format != "text") throw Error(ErrorCode::ParseError, "unknown format '" + format + "'");
  std::ostringstream os;
  render_object(os, report, 0);
  return os.str();
}

}  // namespace eqnf
