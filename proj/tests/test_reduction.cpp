#include "doctest.h"
#include "families.hpp"

using namespace eqnf;
using namespace eqnf::testing;

namespace {

const Vector kLambda0 = Vector::Zero(1);

MapFamily random_reversible_family(Rng& rng, const LinearSetting& ls, double scale = 0.5) {
  const TruncatedMapd x0 = random_equivariant_field(rng, ls.gd, ls.s0, 2, 3, scale);
  const TruncatedMapd dx = random_equivariant_field(rng, ls.gd, ls.s0, 1, 1, 1.0, 3);
  return midpoint_family(ls.s0, x0, {dx});
}

Vector random_in_u(Rng& rng, const LiftContext& ctx, double radius) {
  const Vector c = rng.vector(ctx.dim_u());
  return ctx.u_basis * (radius * c / std::max(c.norm(), 1e-12));
}

}  // namespace

TEST_CASE("lift for q = 1 is the base data") {
  const LiftContext ctx = build_lift(example_a0(), Matrix::Identity(2, 2), swap_group(), 1);
  CHECK(max_abs(ctx.sigma - Matrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs(ctx.a0_hat - example_a0()) == 0.0);
  CHECK(max_abs(ctx.g_hat[1] - swap2()) == 0.0);
  CHECK(ctx.dim_u() == 2);
  CHECK(ctx.complement.cols() == 0);
}

TEST_CASE("lift of a reversor reverses the sequence index") {
  const GroupData gd = swap_group();
  // q = 2: -i = i mod 2, so the reversor acts blockwise.
  const LiftContext c2 = build_lift(Matrix::Identity(2, 2), Matrix::Identity(2, 2), gd, 2);
  Matrix expected2 = Matrix::Zero(4, 4);
  expected2.block(0, 0, 2, 2) = swap2();
  expected2.block(2, 2, 2, 2) = swap2();
  CHECK(max_abs(c2.g_hat[1] - expected2) == 0.0);
  // q = 3: blocks 1 and 2 trade places.
  const LiftContext c3 = build_lift(Matrix::Identity(2, 2), Matrix::Identity(2, 2), gd, 3);
  Matrix expected3 = Matrix::Zero(6, 6);
  expected3.block(0, 0, 2, 2) = swap2();
  expected3.block(2, 4, 2, 2) = swap2();
  expected3.block(4, 2, 2, 2) = swap2();
  CHECK(max_abs(c3.g_hat[1] - expected3) == 0.0);
  Matrix shift = Matrix::Zero(6, 6);
  shift.block(0, 2, 2, 2) = shift.block(2, 4, 2, 2) = shift.block(4, 0, 2, 2) = Matrix::Identity(2, 2);
  CHECK(max_abs(c3.sigma - shift) == 0.0);
}

TEST_CASE("lift rejects linear data that is not equivariant") {
  const GroupData gd = swap_group();
  CHECK_THROWS_AS(build_lift(Matrix::Identity(2, 2), mat2(2, 0, 0, 1), gd, 2), Error);
}

TEST_CASE("lifted maps conjugate to their inverses") {
  Rng rng(31);
  for (int t = 0; t < 3; ++t) {
    const int n = 2 + t, q = 2 + t % 3;
    const LinearSetting ls = random_setting(rng, n, q);
    const MapFamily psi = random_reversible_family(rng, ls);
    const LiftContext ctx = build_lift(ls.s0, ls.s0, ls.gd, q);
    const Vector lam = Vector::Constant(1, 0.01);
    for (int s = 0; s < 20; ++s) {
      const Vector y = rng.vector(ctx.dim_y(), 0.05);
      for (std::size_t g = 0; g < ls.gd.order(); ++g) {
        const Matrix& gh = ctx.g_hat[g];
        const Vector conj = gh * lift_map(psi, gh.inverse() * y, lam, q);
        // chi = -1: conj must invert psi^, so psi^(conj) = y.
        const Vector check = ls.gd.chi[g] > 0 ? Vector(conj - lift_map(psi, y, lam, q))
                                               : Vector(lift_map(psi, conj, lam, q) - y);
        CHECK(check.norm() <= 1e-12);
      }
    }
  }
}

TEST_CASE("xi") {
  const LiftContext id = build_lift(Matrix::Identity(2, 2), Matrix::Identity(2, 2), swap_group(), 3);
  Vector u(2);
  u << 0.3, -0.2;
  CHECK(xi(u, id) == u.replicate(3, 1));
  CHECK(xi(Vector::Zero(2), id).norm() == 0.0);

  const GroupData gd = make_group({Matrix::Identity(2, 2), mat2(1, 0, 0, -1)}, {1.0, -1.0});
  const LiftContext ctx = build_lift(rot(2 * M_PI / 3), rot(2 * M_PI / 3), gd, 3);
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const Vector v = rng.vector(2);
    CHECK((xi(ctx.s0 * v, ctx) - ctx.sigma * xi(v, ctx)).norm() <= 1e-12);
    CHECK((ctx.g_hat[1] * xi(v, ctx) - xi(gd.elements[1] * v, ctx)).norm() <= 1e-12);
  }
  const LiftContext c4 = build_lift(rot(2 * M_PI / 3), rot(2 * M_PI / 3), gd, 4);
  CHECK(c4.dim_u() == 0);
  CHECK_THROWS_AS(xi(u, c4), Error);
}

TEST_CASE("complement equation and reduced map") {
  Rng rng(8);
  const LinearSetting ls = random_setting(rng, 3, 3);
  const MapFamily psi = random_reversible_family(rng, ls);
  const LiftContext ctx = build_lift(ls.s0, ls.s0, ls.gd, 3);
  const Vector lam = Vector::Constant(1, 0.02);

  CHECK(solve_vstar(psi, ctx, Vector::Zero(3), lam).v.norm() == 0.0);
  CHECK(reduced_map(psi, ctx, Vector::Zero(3), lam).norm() == 0.0);

  for (int t = 0; t < 5; ++t) {
    const Vector u = random_in_u(rng, ctx, 0.01);
    const VStar vs = solve_vstar(psi, ctx, u, lam);
    CHECK(vs.residual <= 1e-11);
    const Vector shifted = solve_vstar(psi, ctx, ctx.s0 * u, lam).v;
    CHECK((shifted - ctx.sigma * vs.v).norm() <= 1e-12);
  }

  // Linear maps: v* = 0, psi_r = A0 on U, x* = u.
  const MapFamily lin = polynomial_family(TruncatedMapd::linear(ls.s0, 2));
  const Vector u = random_in_u(rng, ctx, 0.05);
  CHECK(solve_vstar(lin, ctx, u, kLambda0).v.norm() <= 1e-15);
  CHECK((reduced_map(lin, ctx, u, kLambda0) - ls.s0 * u).norm() <= 1e-14);
  CHECK((xstar(lin, ctx, u, kLambda0) - u).norm() <= 1e-15);
  CHECK(bifurcation_fn(lin, ctx, u, kLambda0).norm() <= 1e-14);
}

TEST_CASE("reduced derivatives at the origin") {
  Rng rng(12);
  const LinearSetting ls = random_setting(rng, 4, 3);
  const MapFamily psi = random_reversible_family(rng, ls);
  const LiftContext ctx = build_lift(ls.s0, ls.s0, ls.gd, 3);
  const Vector zero = Vector::Zero(4);
  const double h = 1e-6;
  Matrix fd(ctx.dim_u(), ctx.dim_u());
  Matrix fdx(4, ctx.dim_u());
  for (Eigen::Index i = 0; i < ctx.dim_u(); ++i) {
    const Vector e = ctx.u_basis.col(i);
    fd.col(i) = ctx.u_basis.transpose() * (reduced_map(psi, ctx, h * e, kLambda0) -
                                           reduced_map(psi, ctx, -h * e, kLambda0)) / (2 * h);
    fdx.col(i) = (xstar(psi, ctx, h * e, kLambda0) - xstar(psi, ctx, -h * e, kLambda0)) / (2 * h);
  }
  const Matrix au = ctx.u_basis.transpose() * ls.s0 * ctx.u_basis;
  CHECK(max_abs(fd - au) <= 1e-8);
  CHECK(max_abs(reduced_jacobian(psi, ctx, zero, kLambda0) - au) <= 1e-12);
  CHECK(max_abs(fdx - ctx.u_basis) <= 1e-8);
  // The implicit derivative agrees with finite differences away from 0 too.
  const Vector u = random_in_u(rng, ctx, 0.02);
  const Matrix jac = reduced_jacobian(psi, ctx, u, kLambda0);
  for (Eigen::Index i = 0; i < ctx.dim_u(); ++i) {
    const Vector e = ctx.u_basis.col(i);
    const Vector col = ctx.u_basis.transpose() *
                       (reduced_map(psi, ctx, u + h * e, kLambda0) - reduced_map(psi, ctx, u - h * e, kLambda0)) /
                       (2 * h);
    CHECK((col - jac.col(i)).norm() <= 1e-8);
  }
}

TEST_CASE("planar example with q = 1 reduces trivially") {
  const MapFamily psi = planar_example_family(4);
  const LiftContext ctx = build_lift(example_a0(), Matrix::Identity(2, 2), swap_group(), 1);
  Vector u(2);
  u << 0.01, -0.02;
  CHECK((reduced_map(psi, ctx, u, kLambda0) - psi(u, kLambda0)).norm() <= 1e-16);
  CHECK((xstar(psi, ctx, u, kLambda0) - u).norm() == 0.0);
}

TEST_CASE("bifurcation function and the reversor identity") {
  Rng rng(17);
  const LinearSetting ls = random_setting(rng, 2, 4);
  const MapFamily psi = random_reversible_family(rng, ls);
  const LiftContext ctx = build_lift(ls.s0, ls.s0, ls.gd, 4);
  const Vector lam = Vector::Constant(1, -0.01);
  for (int t = 0; t < 5; ++t) {
    const Vector u = random_in_u(rng, ctx, 0.01);
    const Vector b = bifurcation_fn(psi, ctx, u, lam);
    CHECK((bifurcation_fn(psi, ctx, ls.s0 * u, lam) - ls.s0 * b).norm() <= 1e-12);
    for (std::size_t g = 0; g < ls.gd.order(); ++g) {
      const Matrix& gm = ls.gd.elements[g];
      CHECK((bifurcation_fn(psi, ctx, gm * u, lam) - ls.gd.chi[g] * gm * b).norm() <= 1e-12);
      CHECK(ghat_vstar_identity_check(psi, ctx, u, lam, g) <= 1e-12);
    }
    // psi_r^{-1} really inverts psi_r.
    const Vector w = reduced_inverse(psi, ctx, u, lam);
    CHECK((reduced_map(psi, ctx, w, lam) - u).norm() <= 1e-15);
  }
}

TEST_CASE("trust radius is enforced") {
  const MapFamily psi = planar_example_family(3);
  const LiftContext ctx = build_lift(example_a0(), Matrix::Identity(2, 2), swap_group(), 1);
  CHECK_THROWS_AS(solve_vstar(psi, ctx, Vector::Constant(2, 1.0), kLambda0), Error);
}

TEST_CASE("find_periodic flags the fixed line of the planar example") {
  const MapFamily psi = planar_example_family(4);
  const LiftContext ctx = build_lift(example_a0(), Matrix::Identity(2, 2), swap_group(), 1);
  PeriodicOptions opt;
  opt.box = 0.05;
  opt.grid = 3;
  const auto pts = find_periodic(psi, ctx, {kLambda0}, opt);
  REQUIRE(pts.size() >= 2);
  for (const auto& p : pts) {
    CHECK(std::abs(p.u(0) - p.u(1)) <= 1e-10);
    CHECK_FALSE(p.isolated);
    CHECK(p.nullity == 1);
    CHECK(p.periodicity_residual <= 1e-12);
  }
}

TEST_CASE("find_periodic recovers planted periodic orbits") {
  for (int q : {3, 4}) {
    const double eps = q == 3 ? 0.02 : 0.3, lam = q == 3 ? 1e-4 : 4e-4;
    const auto [f, df] = planted_planar_field(q, eps);
    const GroupData gd = make_group({Matrix::Identity(2, 2), mat2(1, 0, 0, -1)}, {1.0, -1.0});
    const Matrix s0 = rot(2 * M_PI / q);
    const MapFamily psi = midpoint_family(s0, f, {df});
    const LiftContext ctx = build_lift(s0, s0, gd, q);
    PeriodicOptions opt;
    opt.box = 0.04;
    opt.grid = 7;
    const Vector lv = Vector::Constant(1, lam);
    const auto pts = find_periodic(psi, ctx, {lv}, opt);
    const auto planted = planted_zeros(q, eps, lam);
    // Origin plus two orbits.
    CHECK(pts.size() == 3);
    for (const auto& z : planted) {
      bool hit = false;
      for (const auto& p : pts) {
        Vector c = p.u;
        for (int j = 0; j < q; ++j, c = s0 * c) hit = hit || (c - z).norm() <= 1e-8;
      }
      CHECK(hit);
    }
    for (const auto& p : pts) {
      CHECK(p.isolated);
      CHECK(p.periodicity_residual <= 1e-8);
      CHECK(p.bifurcation_residual <= 1e-8);
    }
  }
}

TEST_CASE("reduced map against the normal form") {
  Rng rng(41);
  const GroupData gd = make_group({Matrix::Identity(2, 2), mat2(1, 0, 0, -1)}, {1.0, -1.0});
  const Matrix s0 = rot(2 * M_PI / 3);
  const LiftContext ctx = build_lift(s0, s0, gd, 3);

  // Already in normal form with no remainder: only rounding is left.
  const TruncatedMapd x = random_equivariant_field(rng, gd, s0, 2, 3, 0.5);
  const TruncatedMapd exact = s0 * exp_vf(x, 3);
  const MapFamily nf_map = polynomial_family(exact);
  const NormalFormResult nf = nilpotent_nf(MapSamples{{kLambda0}, {exact}}, s0, gd, 3);
  const ConsistencyReport r0 = nf_reduction_consistency(nf_map, nf, ctx, 3);
  CHECK(r0.passed);
  CHECK(r0.eigenvalue_mismatch <= 1e-12);

  // A planted degree-4 remainder that breaks S0-equivariance.
  TruncatedMapd planted(2, 4);
  planted.coeffs().leftCols(exact.coeffs().cols()) = exact.coeffs();
  planted.coeff(0, {4, 0}) = 1.0;
  const MapFamily pm = polynomial_family(planted);
  const ConsistencyReport r1 = nf_reduction_consistency(pm, nf, ctx, 3);
  CHECK(r1.slope == doctest::Approx(4.0).epsilon(0.05));
  CHECK(r1.passed);
  CHECK_THROWS_AS(nf_reduction_consistency(pm, nf, ctx, 3, 0, 1e-4, 1e-2, -0.5, true), Error);
}
