// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include "families.hpp"

#include "eqnf/commands.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace eqnf;
using namespace eqnf::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const Vector kLam0 = Vector::Zero(1);

// ---------------------------------------------------------------------------
// 1. Linearization of the planar example.

Outcome linearization() {
  const auto t0 = Clock::now();
  const Matrix a0 = example_a0();
  const SUDecomposition su = su_decomposition(a0);
  const JCDecomposition jc = jordan_chevalley(a0);
  const Matrix n0 = mat2(2, -2, 2, -2);
  const double es = max_abs(su.semisimple - Matrix::Identity(2, 2));
  const double en = max_abs(su.nil_log - n0);
  // N0^2 = 0, so the nilpotent logarithm equals the Jordan-Chevalley nilpotent part.
  const double ejc = std::max(max_abs(jc.nilpotent - n0), max_abs(jc.semisimple - Matrix::Identity(2, 2)));
  const double t = seconds_since(t0);
  return {es <= 1e-12 && en <= 1e-12 && ejc <= 1e-12 && t < 1.0,
          fmt("|S0 - I| = %.2e, |N0 - [[2,-2],[2,-2]]| = %.2e, |JC - (I, N0)| = %.2e, %.3f s", es, en, ejc, t)};
}

// ---------------------------------------------------------------------------
// 2. Order-2 normal form of the planar example.

Outcome planar_normal_form() {
  const auto t0 = Clock::now();
  const int k = 2;
  const Problem p = builtin_problem("paper-example");
  const NormalFormResult r = nilpotent_nf(sample_jets(p.family, {kLam0}, k), example_a0(), p.group, k);
  const DegreeInfo& d2 = r.degrees.at(1);

  // Admissible space spanned by ((x+y)^2, -(x+y)^2).
  Vector form(6);
  form << 1, -1, 2, -2, 1, -1;
  bool shape = d2.admissible.cols() == 1;
  double along = 1.0;
  if (shape) {
    const Vector a = d2.admissible.col(0);
    along = 1.0 - std::abs(a.dot(form)) / (a.norm() * form.norm());
    shape = along <= 1e-12;
  }
  const NormalFormSample& s = r.samples.at(0);
  // d: coordinate of the exponent layer along the admissible direction.
  const double d = form.dot(s.exponent.layer_vector(2)) / form.squaredNorm();

  // Transform coefficients g = (a x^2 + b xy + c y^2, c x^2 + b xy + a y^2).
  const Matrix g = s.transform.layer(2);
  const double a = g(0, 0), b = g(0, 1), c = g(0, 2);
  Matrix shape_g(2, 3);
  shape_g << a, b, c, c, b, a;
  const double fam = max_abs(g - shape_g);
  const double eb = std::abs(b + 2 * c), ea = std::abs(a - (-0.5 + c));

  // The c = 0 member conjugates the map to its linear part.
  TruncatedMapd g0(2, k);
  g0.coeff(0, {2, 0}) = -0.5;
  g0.coeff(1, {0, 2}) = -0.5;
  const TruncatedMapd conj = ad_conjugate(exp_vf(g0, k), p.family.jet(kLam0, k), k);
  const double res = max_coeff(conj - TruncatedMapd::linear(example_a0(), k));
  const double t = seconds_since(t0);
  const bool pass = shape && std::abs(d) <= 1e-9 && fam <= 1e-9 && eb <= 1e-9 && ea <= 1e-9 && res <= 1e-9 && t < 5.0;
  return {pass, fmt("dim = %.0f, d = %.1e, |b + 2c| = %.1e, |a + 1/2 - c| = %.1e", static_cast<double>(d2.admissible.cols()),
                    d, eb, ea) +
                    fmt(", c = 0 residual = %.1e, %.3f s", res, t)};
}

// ---------------------------------------------------------------------------
// 3. Projections for random finite groups.

Matrix embed(const Matrix& block, int n) {
  Matrix m = Matrix::Identity(n, n);
  m.topLeftCorner(block.rows(), block.cols()) = block;
  return m;
}

Matrix sign_diag(int n, int i) {
  Matrix m = Matrix::Identity(n, n);
  m(i, i) = -1;
  return m;
}

GroupData random_group(Rng& rng, int n) {
  std::vector<Matrix> gens;
  const int kind = rng.integer(0, n >= 3 ? 3 : 2);
  if (kind == 0) {
    gens = {embed(rot(2 * M_PI / rng.integer(2, 8)), n)};
  } else if (kind == 1) {
    const int m = rng.integer(2, 4);  // dihedral of order 2m <= 8
    gens = {embed(rot(2 * M_PI / m), n), embed(mat2(1, 0, 0, -1), n)};
  } else if (kind == 2) {
    gens = {embed(rot(M_PI / 2), n), -Matrix::Identity(n, n)};  // Z4 x Z2
  } else {
    for (int i = 0; i < 3; ++i) gens.push_back(sign_diag(n, i));  // Z2^3
  }
  GroupData gd = generate_group(gens, Character(gens.size(), 1.0));
  return conjugate_group(gd, random_frame(rng, n));
}

Outcome projection_suite() {
  Rng rng(301);
  double worst = 0.0;
  int pairs = 0;
  std::size_t max_order = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(2, 5);
    const GroupData gd = random_group(rng, n);
    max_order = std::max(max_order, gd.order());
    const Matrix a = rng.matrix(n, n);
    const auto chars = enumerate_characters(gd);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const Matrix pi = project(a, gd, chars[i]);
      worst = std::max(worst, max_abs(project(pi, gd, chars[i]) - pi));
      for (std::size_t j = 0; j < chars.size(); ++j) {
        if (i == j) continue;
        worst = std::max(worst, max_abs(project(pi, gd, chars[j])));
        ++pairs;
      }
    }
  }
  return {worst <= 1e-12 && max_order <= 8,
          fmt("100 instances, %.0f character pairs, max |G| = %.0f, worst residual %.2e", pairs,
              static_cast<double>(max_order), worst)};
}

// ---------------------------------------------------------------------------
// 4. Adapted inner product.

Outcome inner_product_suite() {
  Rng rng(401);
  double normal = 0, orth = 0, rev = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(2, 4);
    const LinearSetting ls = random_setting(rng, n, rng.integer(1, 6));
    const AdaptedInnerProduct ip = invariant_inner_product(ls.s0, ls.gd);
    const Matrix ss = adjoint_wrt(ip, ls.s0);
    normal = std::max(normal, max_abs(ls.s0 * ss - ss * ls.s0));
    for (std::size_t i = 0; i < ls.gd.order(); ++i) {
      const Matrix& g = ls.gd.elements[i];
      orth = std::max(orth, max_abs(adjoint_wrt(ip, g) * g - Matrix::Identity(n, n)));
      const Matrix side = ls.gd.chi[i] > 0 ? ss : Matrix(ss.inverse());
      rev = std::max(rev, max_abs(g * ss - side * g));
    }
  }
  const double w = std::max({normal, orth, rev});
  return {w <= 1e-10, fmt("|S0 S0* - S0* S0| = %.2e, |g* g - I| = %.2e, |g S0* - (S0*)^chi g| = %.2e", normal, orth, rev)};
}

// ---------------------------------------------------------------------------
// 5. Campbell-Hausdorff.

Outcome campbell_hausdorff_suite() {
  Rng rng(501);
  double left = 0, right = 0, ck0 = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(1, 3), k = rng.integer(2, 4);
    TruncatedMapd x = rng.poly(n, k, 0.3, 1);
    x.layer(k).setZero();
    x.layer(1) = rng.matrix(n, n, 0.4);
    TruncatedMapd y(n, k);
    y.layer(k) = rng.matrix(n, y.space().count(k), 0.5);
    const TruncatedMapd ex = exp_vf(x, k), ey = exp_vf(y, k);
    left = std::max(left, max_coeff(compose(ex, ey, k) - exp_vf(ch_compose(x, y, k, ChSide::Left), k)));
    right = std::max(right, max_coeff(compose(ey, ex, k) - exp_vf(ch_compose(x, y, k, ChSide::Right), k)));
    const Eigen::Index d = hk_dimension(n, k);
    ck0 = std::max(ck0, max_abs(ck_operator(Matrix::Zero(n, n), k).matrix - Matrix::Identity(d, d)));
  }
  return {left <= 1e-9 && right <= 1e-9 && ck0 <= 1e-15,
          fmt("e^X e^Y: %.2e, e^Y e^X: %.2e, |C_k(0) - I| = %.2e", left, right, ck0)};
}

// ---------------------------------------------------------------------------
// 6. Reduction equivariance.

Vector random_in_u(Rng& rng, const LiftContext& ctx, double radius) {
  const Vector c = rng.vector(ctx.dim_u());
  return ctx.u_basis * (radius * rng.uniform(0.1, 1.0) * c / std::max(c.norm(), 1e-12));
}

MapFamily random_family(Rng& rng, const LinearSetting& ls, double scale) {
  const TruncatedMapd x0 = random_equivariant_field(rng, ls.gd, ls.s0, 2, 3, scale);
  const TruncatedMapd dx = random_equivariant_field(rng, ls.gd, ls.s0, 1, 1, 1.0, 3);
  return midpoint_family(ls.s0, x0, {dx});
}

Outcome reduction_suite() {
  const auto t0 = Clock::now();
  Rng rng(601);
  ReductionInvariants w;
  int points = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 3, q = 1 + (t / 3) % 4;
    const LinearSetting ls = random_setting(rng, n, q);
    const MapFamily psi = random_family(rng, ls, 0.5);
    const LiftContext ctx = build_lift(ls.s0, ls.s0, ls.gd, q);
    const Vector lam = Vector::Constant(1, rng.uniform(-0.02, 0.02));
    if (ctx.dim_u() == 0) continue;
    for (int s = 0; s < 4; ++s, ++points) {
      const ReductionInvariants r = reduction_invariants(psi, ctx, random_in_u(rng, ctx, 1e-2), lam);
      w.reduced_s0 = std::max(w.reduced_s0, r.reduced_s0);
      w.reduced_group = std::max(w.reduced_group, r.reduced_group);
      w.bifurcation_s0 = std::max(w.bifurcation_s0, r.bifurcation_s0);
      w.bifurcation_group = std::max(w.bifurcation_group, r.bifurcation_group);
      w.vstar_shift = std::max(w.vstar_shift, r.vstar_shift);
      w.ghat_vstar = std::max(w.ghat_vstar, r.ghat_vstar);
      w.origin = std::max(w.origin, r.origin);
    }
  }
  const double t = seconds_since(t0);
  return {w.worst() <= 1e-8 && t < 60.0 && points > 0,
          fmt("%.0f points; psi_r S0 %.1e, psi_r G %.1e, B S0 %.1e", points, w.reduced_s0, w.reduced_group,
              w.bifurcation_s0) +
              fmt(", B G %.1e, v* shift %.1e, g^ v* %.1e, %.1f s", w.bifurcation_group, w.vstar_shift, w.ghat_vstar, t)};
}

// ---------------------------------------------------------------------------
// 7. Reduced map against the normal form.

Outcome consistency_suite() {
  Rng rng(701);
  std::string detail;
  bool pass = true;
  struct Case {
    int n, q, k;
  };
  for (const Case c : {Case{2, 3, 2}, Case{2, 4, 2}, Case{2, 3, 3}, Case{2, 4, 3}, Case{4, 3, 3}}) {
    const LinearSetting ls = random_setting(rng, c.n, c.q);
    const MapFamily base = random_family(rng, ls, 0.5);
    const MapFamily psi = conjugated_family(base, random_invariant_change(rng, ls.gd, c.k + 1, 0.5));
    const NormalFormResult nf = nilpotent_nf(sample_jets(psi, {kLam0}, c.k), ls.s0, ls.gd, c.k);
    const MapFamily normalized = normalized_family(psi, nf);
    const LiftContext ctx = build_lift(ls.s0, ls.s0, ls.gd, c.q);
    const ConsistencyReport r = nf_reduction_consistency(normalized, nf, ctx, c.k, 0, 1e-4, 1e-2, 0.2);
    pass = pass && r.slope >= c.k + 0.8;
    detail += (detail.empty() ? "" : ", ") + fmt("q=%.0f k=%.0f slope %.2f", c.q, c.k, r.slope);
  }
  return {pass, detail + " (required >= k + 0.8)"};
}

// ---------------------------------------------------------------------------
// 8. Periodic points: determining equation against zeros of B.

// Newton on B(u) = 0 in U with a finite-difference Jacobian.
Vector newton_bifurcation(const MapFamily& psi, const LiftContext& ctx, Vector u, const Vector& lam) {
  const Eigen::Index d = ctx.dim_u();
  auto b = [&](const Vector& c) { return Vector(ctx.u_basis.transpose() * bifurcation_fn(psi, ctx, ctx.u_basis * c, lam)); };
  Vector c = ctx.u_basis.transpose() * u;
  for (int it = 0; it < 40; ++it) {
    const Vector f = b(c);
    if (f.norm() <= 1e-15) break;
    Matrix j(d, d);
    const double h = 1e-7 * std::max(1e-3, c.norm());
    for (Eigen::Index i = 0; i < d; ++i) {
      Vector e = Vector::Zero(d);
      e(i) = h;
      j.col(i) = (b(c + e) - b(c - e)) / (2 * h);
    }
    const Vector step = j.colPivHouseholderQr().solve(f);
    c -= step;
    if (step.norm() <= 1e-15 * std::max(1.0, c.norm())) break;
  }
  return ctx.u_basis * c;
}

Outcome periodic_suite() {
  struct Case {
    int q;
    double eps, lam;
    bool frame;
  };
  const std::vector<Case> cases = {
      {3, 0.02, 1e-4, false}, {3, 0.03, 2e-4, false}, {3, 0.015, 5e-5, true}, {3, 0.02, 1.5e-4, true},
      {3, 0.025, 8e-5, false}, {4, 0.3, 4e-4, false}, {4, 0.2, 3e-4, false}, {4, 0.25, 2e-4, true},
      {4, 0.3, 2.5e-4, true}, {4, 0.1, 3e-4, false},
  };
  Rng rng(801);
  double match = 0, bzero = 0, period = 0;
  bool found_all = true;
  for (const Case& c : cases) {
    const auto [f, df] = planted_planar_field(c.q, c.eps);
    GroupData gd = make_group({Matrix::Identity(2, 2), mat2(1, 0, 0, -1)}, {1.0, -1.0});
    Matrix s0 = rot(2 * M_PI / c.q);
    MapFamily psi = midpoint_family(s0, f, {df});
    std::vector<Vector> planted = planted_zeros(c.q, c.eps, c.lam);
    if (c.frame) {
      const Matrix p = random_frame(rng, 2);
      const Matrix pinv = p.inverse();
      const MapFamily inner = psi;
      psi.eval = [inner, p, pinv](const Vector& x, const Vector& l) { return Vector(p * inner.eval(pinv * x, l)); };
      psi.jacobian = [inner, p, pinv](const Vector& x, const Vector& l) {
        return Matrix(p * inner.jacobian(pinv * x, l) * pinv);
      };
      psi.jet = [inner, p, pinv](const Vector& l, int k) {
        return compose(compose(TruncatedMapd::linear(p, k), inner.jet(l, k), k), TruncatedMapd::linear(pinv, k), k);
      };
      gd = conjugate_group(gd, p);
      s0 = p * s0 * pinv;
      for (auto& z : planted) z = p * z;
    }
    const LiftContext ctx = build_lift(s0, s0, gd, c.q);
    const Vector lv = Vector::Constant(1, c.lam);
    PeriodicOptions opt;
    opt.box = 0.05;
    opt.grid = 7;
    const auto pts = find_periodic(psi, ctx, {lv}, opt);
    for (const auto& pt : pts) {
      bzero = std::max(bzero, pt.bifurcation_residual);
      period = std::max(period, pt.periodicity_residual);
      found_all = found_all && pt.isolated;
    }
    // Every planted point is a zero of B (found by Newton on B alone) and a
    // solution of the determining equation up to the S0-orbit.
    for (const auto& z : planted) {
      const Vector zb = newton_bifurcation(psi, ctx, z + 1e-4 * z.norm() * Vector::Ones(2), lv);
      double best = std::numeric_limits<double>::infinity(), best_b = best;
      for (const auto& pt : pts) {
        Vector u = pt.u;
        for (int j = 0; j < c.q; ++j, u = s0 * u) {
          best = std::min(best, (u - z).norm());
          best_b = std::min(best_b, (u - zb).norm());
        }
      }
      match = std::max({match, best, best_b});
    }
    found_all = found_all && pts.size() == 3;  // origin and two orbits
  }

  // Planar example with q = 1: a line of fixed points flagged by rank deficiency.
  const Problem pe = builtin_problem("paper-example");
  const LiftContext ctx1 = build_lift(example_a0(), Matrix::Identity(2, 2), pe.group, 1);
  PeriodicOptions o1;
  o1.grid = 3;
  const auto line = find_periodic(planar_example_family(4), ctx1, {kLam0}, o1);
  bool flagged = line.size() >= 2;
  for (const auto& pt : line) flagged = flagged && !pt.isolated && pt.nullity == 1 && std::abs(pt.u(0) - pt.u(1)) <= 1e-10;

  const bool pass = match <= 1e-8 && bzero <= 1e-8 && period <= 1e-8 && found_all && flagged;
  return {pass, fmt("10 families; planted vs solutions %.1e, |B| %.1e, |psi^q(x) - x| %.1e", match, bzero, period) +
                    (flagged ? ", fixed line y = x flagged" : ", fixed line NOT flagged")};
}

// ---------------------------------------------------------------------------
// 9. Exponent identities of the nilpotent normal form.

struct Constructed {
  Matrix s0, n;
  GroupData gd;
};

Outcome exponent_suite() {
  Rng rng(901);
  std::vector<Constructed> cases;
  const GroupData swap = make_group({Matrix::Identity(2, 2), swap2()}, {1.0, -1.0});
  for (double s : {0.5, 1.0, 2.0}) cases.push_back({Matrix::Identity(2, 2), s * mat2(1, -1, 1, -1), swap});
  {
    Matrix r = Matrix::Identity(4, 4);
    r(1, 1) = r(2, 2) = -1;
    const GroupData gd = generate_group({r}, {-1.0});
    for (double th : {2 * M_PI / 3, M_PI / 2, 0.9}) {
      const Matrix s0 = block_diag({rot(th), rot(th)});
      Matrix n = Matrix::Zero(4, 4);
      n.topRightCorner(2, 2) = 0.5 * Matrix::Identity(2, 2);
      cases.push_back({s0, n, gd});
    }
  }
  for (int t = 0; t < 4; ++t) {
    const LinearSetting ls = random_setting(rng, 2 + t % 3, 3 + t % 2);
    cases.push_back({ls.s0, Matrix::Zero(ls.s0.rows(), ls.s0.rows()), ls.gd});
  }

  ExponentChecks w;
  double nf_res = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Constructed& c = cases[i];
    const int k = i % 2 ? 4 : 3;
    TruncatedMapd x = random_equivariant_field(rng, c.gd, c.s0, 2, k, 0.4);
    x += TruncatedMapd::linear(c.n, k);
    const TruncatedMapd map = ad_conjugate(random_invariant_change(rng, c.gd, k, 0.4), c.s0 * exp_vf(x, k), k);
    const NormalFormResult nf = nilpotent_nf(MapSamples{{kLam0}, {map}}, map.linear_part(), c.gd, k);
    const ExponentChecks e = check_exponent(nf, c.gd, 0);
    w.jet = std::max(w.jet, e.jet);
    w.commutes_s0 = std::max(w.commutes_s0, e.commutes_s0);
    w.adjoint_kernel = std::max(w.adjoint_kernel, e.adjoint_kernel);
    w.equivariance = std::max(w.equivariance, e.equivariance);
    w.transform_equivariance = std::max(w.transform_equivariance, e.transform_equivariance);
    nf_res = std::max(nf_res, nf.residual);
  }
  const double worst = std::max({w.jet, w.commutes_s0, w.adjoint_kernel, w.equivariance, w.transform_equivariance});
  return {worst <= 1e-9 && nf_res <= 1e-9,
          fmt("10 families; jet %.1e, S0 %.1e, ad(N0*) %.1e, chi %.1e", w.jet, w.commutes_s0, w.adjoint_kernel,
              w.equivariance) +
              fmt(", g Phi g^-1 %.1e, nf residual %.1e", w.transform_equivariance, nf_res)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"linearization of the planar example", linearization},
      {"order-2 normal form of the planar example", planar_normal_form},
      {"character projections", projection_suite},
      {"adapted inner product", inner_product_suite},
      {"Campbell-Hausdorff composition", campbell_hausdorff_suite},
      {"reduction equivariance", reduction_suite},
      {"reduced map vs normal form slope", consistency_suite},
      {"periodic points vs zeros of B", periodic_suite},
      {"normal-form exponent identities", exponent_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
