#include "eqnf/reduction.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace eqnf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLiftTol = 1e-11;

int wrap(int i, int q) { return ((i % q) + q) % q; }

Matrix block_diag_repeat(const Matrix& a, int q) {
  const Eigen::Index n = a.rows();
  Matrix out = Matrix::Zero(q * n, q * n);
  for (int i = 0; i < q; ++i) out.block(i * n, i * n, n, n) = a;
  return out;
}

Matrix shift_matrix(int n, int q, int power) {
  Matrix out = Matrix::Zero(q * n, q * n);
  for (int i = 0; i < q; ++i) out.block(i * n, wrap(i + power, q) * n, n, n) = Matrix::Identity(n, n);
  return out;
}

Matrix hat(const Matrix& g, double chi, int q) {
  const Eigen::Index n = g.rows();
  const int c = chi > 0 ? 1 : -1;
  Matrix out = Matrix::Zero(q * n, q * n);
  for (int i = 0; i < q; ++i) out.block(i * n, wrap(c * i, q) * n, n, n) = g;
  return out;
}

double scale_of(const Matrix& m) { return std::max(1.0, max_abs(m)); }

void require_lift(double residual, double scale, const char* identity) {
  if (!(residual <= kLiftTol * scale)) {
    throw Error(ErrorCode::InvariantViolation, std::string("lift identity fails: ") + identity, residual);
  }
}

Matrix lift_jacobian(const MapFamily& psi, const Vector& y, const Vector& lambda, int q) {
  const int n = psi.n;
  Matrix j = Matrix::Zero(q * n, q * n);
  for (int i = 0; i < q; ++i) j.block(i * n, i * n, n, n) = psi.jacobian(y.segment(i * n, n), lambda);
  return j;
}

void check_radius(const Vector& u, const ReductionOptions& opt) {
  if (u.norm() > opt.radius) {
    throw Error(ErrorCode::NoConvergence,
                "|u| = " + std::to_string(u.norm()) + " exceeds the trust radius " + std::to_string(opt.radius),
                opt.radius);
  }
}

Vector to_coords(const LiftContext& ctx, const Vector& u) { return ctx.u_basis.transpose() * u; }

// Reduced map in u_basis coordinates, with the converged sequence returned.
Vector reduced_coords(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                      const ReductionOptions& opt, Vector* point = nullptr) {
  const VStar vs = solve_vstar(psi, ctx, u, lambda, opt);
  const Vector x = xi(u, ctx) + vs.v;
  if (point) *point = x;
  return ctx.split.coefficients_a() * lift_map(psi, x, lambda, ctx.q);
}

bool lex_less(const Vector& a, const Vector& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - tol) return true;
    if (a(i) > b(i) + tol) return false;
  }
  return false;
}

}  // namespace

LiftContext build_lift(const Matrix& a0, const Matrix& s0, const GroupData& gd, int q) {
  require_square(a0, "A0");
  require_square(s0, "S0");
  require_same_dim(a0.rows(), s0.rows(), "build_lift");
  require_same_dim(a0.rows(), gd.dim(), "build_lift group");
  if (q < 1) throw Error(ErrorCode::DimensionMismatch, "period must be positive");
  if (!is_invertible(s0)) throw Error(ErrorCode::SingularInput, "S0 is singular");

  LiftContext ctx;
  ctx.q = q;
  ctx.n = static_cast<int>(a0.rows());
  ctx.group = gd;
  ctx.s0 = s0;
  ctx.a0 = a0;
  const int n = ctx.n;
  ctx.sigma = shift_matrix(n, q, 1);
  ctx.s0_hat = block_diag_repeat(s0, q);
  ctx.a0_hat = block_diag_repeat(a0, q);
  for (std::size_t i = 0; i < gd.order(); ++i) ctx.g_hat.push_back(hat(gd.elements[i], gd.chi[i], q));

  const Matrix sq = matrix_power(s0, q);
  ctx.u_basis = intersect_kernel(Matrix::Identity(n, n), sq - Matrix::Identity(n, n));
  ctx.xi_basis = Matrix(q * n, ctx.u_basis.cols());
  Matrix p = Matrix::Identity(n, n);
  for (int i = 0; i < q; ++i) {
    ctx.xi_basis.middleRows(i * n, n) = p * ctx.u_basis;
    p = s0 * p;
  }
  const Eigen::Index qn = static_cast<Eigen::Index>(q) * n;
  ctx.complement = intersect_image(Matrix::Identity(qn, qn), ctx.s0_hat - ctx.sigma);
  try {
    ctx.split = make_split(Matrix::Identity(qn, qn), ctx.xi_basis, ctx.complement);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("Y_q is not xi(U) + Im(S0^ - sigma): ") + e.what(),
                e.value());
  }

  const LiftReport r = lift_report(ctx);
  require_lift(r.sigma_period, 1.0, "sigma^q = I");
  require_lift(r.g_sigma, scale_of(s0), "g^ sigma = sigma^chi g^");
  require_lift(r.representation, scale_of(s0), "(g1 g2)^ = g1^ g2^");
  require_lift(r.sigma_s0, scale_of(s0), "sigma S0^ = S0^ sigma");
  require_lift(r.xi_shift, std::pow(scale_of(s0), q + 1), "xi(S0 u) = sigma xi(u)");
  require_lift(r.xi_a0, std::pow(scale_of(s0), q) * scale_of(a0), "xi(A0 u) = A0^ xi(u)");
  require_lift(r.xi_g, std::pow(scale_of(s0), q) * 10.0, "g^ xi(u) = xi(g u)");
  return ctx;
}

LiftReport lift_report(const LiftContext& ctx) {
  LiftReport r;
  const int q = ctx.q, n = ctx.n;
  const Eigen::Index qn = ctx.dim_y();
  const GroupData& gd = ctx.group;
  r.sigma_period = max_abs(matrix_power(ctx.sigma, q) - Matrix::Identity(qn, qn));
  const Matrix sigma_inv = shift_matrix(n, q, -1);
  for (std::size_t i = 0; i < gd.order(); ++i) {
    const Matrix& sc = gd.chi[i] > 0 ? ctx.sigma : sigma_inv;
    r.g_sigma = std::max(r.g_sigma, max_abs(ctx.g_hat[i] * ctx.sigma - sc * ctx.g_hat[i]));
    for (std::size_t j = 0; j < gd.order(); ++j) {
      const int k = gd.mult_table[i][j];
      r.representation = std::max(r.representation, max_abs(ctx.g_hat[k] - ctx.g_hat[i] * ctx.g_hat[j]));
    }
  }
  r.sigma_s0 = max_abs(ctx.sigma * ctx.s0_hat - ctx.s0_hat * ctx.sigma);
  // xi identities on the basis of U; xi(S0 u) and xi(A0 u) need S0 u, A0 u in U.
  const Matrix& ub = ctx.u_basis;
  auto xi_of = [&](const Matrix& u) {
    Matrix out(qn, u.cols());
    Matrix p = Matrix::Identity(n, n);
    for (int i = 0; i < q; ++i) {
      out.middleRows(i * n, n) = p * u;
      p = ctx.s0 * p;
    }
    return out;
  };
  r.xi_shift = max_abs(xi_of(ctx.s0 * ub) - ctx.sigma * ctx.xi_basis);
  r.xi_a0 = max_abs(xi_of(ctx.a0 * ub) - ctx.a0_hat * ctx.xi_basis);
  for (std::size_t i = 0; i < gd.order(); ++i) {
    r.xi_g = std::max(r.xi_g, max_abs(ctx.g_hat[i] * ctx.xi_basis - xi_of(gd.elements[i] * ub)));
  }
  return r;
}

Vector xi(const Vector& u, const LiftContext& ctx) {
  require_same_dim(u.size(), ctx.n, "xi");
  const Matrix sq = matrix_power(ctx.s0, ctx.q);
  const double defect = (sq * u - u).norm();
  if (defect > kInUTol * std::max(1.0, u.norm())) throw Error(ErrorCode::NotInU, "u is not in ker(S0^q - I)", defect);
  Vector out(ctx.dim_y());
  Vector p = u;
  for (int i = 0; i < ctx.q; ++i) {
    out.segment(i * ctx.n, ctx.n) = p;
    p = ctx.s0 * p;
  }
  return out;
}

Vector lift_map(const MapFamily& psi, const Vector& y, const Vector& lambda, int q) {
  const int n = psi.n;
  require_same_dim(y.size(), static_cast<Eigen::Index>(q) * n, "lift_map");
  Vector out(y.size());
  for (int i = 0; i < q; ++i) out.segment(i * n, n) = psi(y.segment(i * n, n), lambda);
  return out;
}

VStar solve_vstar(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                  const ReductionOptions& opt) {
  require_same_dim(psi.n, ctx.n, "solve_vstar");
  check_radius(u, opt);
  const Vector x0 = xi(u, ctx);
  VStar out;
  out.v = Vector::Zero(ctx.dim_y());
  const Eigen::Index c = ctx.complement.cols();
  if (c == 0) return out;

  const Matrix pb = ctx.split.coefficients_b();
  const Matrix& cb = ctx.split.part_b;
  Vector w = Vector::Zero(c);
  double best = std::numeric_limits<double>::infinity();
  auto residual = [&](const Vector& wv, Vector* full = nullptr) {
    const Vector v = cb * wv;
    const Vector img = lift_map(psi, x0 + v, lambda, ctx.q);
    if (full) *full = img;
    return Vector(pb * (img - ctx.sigma * v));
  };
  for (int it = 0;; ++it) {
    const Vector f = residual(w);
    const double fn = f.norm();
    const double scale = std::max(x0.norm(), (cb * w).norm());
    out.iterations = it;
    if (fn == 0.0 || fn <= 4 * kEps * scale) break;
    if (fn >= best && fn <= 1e-11) break;  // stagnation at rounding level
    if (it >= opt.max_iter) break;
    best = std::min(best, fn);
    const Matrix j = pb * (lift_jacobian(psi, x0 + cb * w, lambda, ctx.q) - ctx.sigma) * cb;
    w -= j.partialPivLu().solve(f);
  }
  out.v = cb * w;
  const Vector img = lift_map(psi, x0 + out.v, lambda, ctx.q);
  out.residual = (ctx.split.projector_b * img - ctx.sigma * out.v).norm();
  if (!(out.residual <= 1e-11)) {
    throw Error(ErrorCode::NoConvergence,
                "complement equation did not converge; try |u| below " + std::to_string(0.5 * u.norm()),
                out.residual);
  }
  return out;
}

Vector reduced_map(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                   const ReductionOptions& opt) {
  return ctx.u_basis * reduced_coords(psi, ctx, u, lambda, opt);
}

Matrix reduced_jacobian(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                        const ReductionOptions& opt) {
  Vector x;
  reduced_coords(psi, ctx, u, lambda, opt, &x);
  const Matrix j = lift_jacobian(psi, x, lambda, ctx.q);
  const Matrix pa = ctx.split.coefficients_a();
  const Matrix& xb = ctx.xi_basis;
  if (ctx.complement.cols() == 0) return pa * j * xb;
  const Matrix pb = ctx.split.coefficients_b();
  const Matrix& cb = ctx.split.part_b;
  const Matrix jw = pb * (j - ctx.sigma) * cb;
  const Matrix dw = -jw.partialPivLu().solve(pb * j * xb);
  return pa * j * (xb + cb * dw);
}

Vector reduced_inverse(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                       const ReductionOptions& opt) {
  const Vector y = to_coords(ctx, u);
  const Matrix d0 = reduced_jacobian(psi, ctx, Vector::Zero(ctx.n), lambda, opt);
  auto f = [&](const Vector& c) { return reduced_coords(psi, ctx, ctx.u_basis * c, lambda, opt); };
  auto df = [&](const Vector& c) { return reduced_jacobian(psi, ctx, ctx.u_basis * c, lambda, opt); };
  try {
    return ctx.u_basis * newton_inverse(f, df, y, d0.partialPivLu().solve(y));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InverseNewtonFailed) throw;
    throw Error(ErrorCode::InverseNewtonFailed, std::string("reduced map inversion: ") + e.what(), e.value());
  }
}

Vector xstar(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
             const ReductionOptions& opt) {
  const VStar vs = solve_vstar(psi, ctx, u, lambda, opt);
  return u + vs.v.head(ctx.n);
}

Vector bifurcation_fn(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                      const ReductionOptions& opt) {
  const Vector fwd = reduced_map(psi, ctx, u, lambda, opt);
  const Vector back = reduced_inverse(psi, ctx, u, lambda, opt);
  return ctx.s0.partialPivLu().solve(fwd) - ctx.s0 * back;
}

double ghat_vstar_identity_check(const MapFamily& psi, const LiftContext& ctx, const Vector& u,
                                 const Vector& lambda, std::size_t g_index, const ReductionOptions& opt) {
  const GroupData& gd = ctx.group;
  if (g_index >= gd.order()) throw Error(ErrorCode::DimensionMismatch, "group element index out of range");
  const Matrix& g = gd.elements[g_index];
  const Vector lhs = ctx.g_hat[g_index] * solve_vstar(psi, ctx, u, lambda, opt).v;
  Vector rhs;
  if (gd.chi[g_index] > 0) {
    rhs = solve_vstar(psi, ctx, g * u, lambda, opt).v;
  } else {
    const Vector moved = g * reduced_map(psi, ctx, u, lambda, opt);
    rhs = ctx.sigma * solve_vstar(psi, ctx, moved, lambda, opt).v;
  }
  return (lhs - rhs).norm();
}

double ReductionInvariants::worst() const {
  return std::max({reduced_s0, reduced_group, bifurcation_s0, bifurcation_group, vstar_shift, ghat_vstar, origin});
}

ReductionInvariants reduction_invariants(const MapFamily& psi, const LiftContext& ctx, const Vector& u,
                                         const Vector& lambda, const ReductionOptions& opt) {
  ReductionInvariants r;
  const Vector pu = reduced_map(psi, ctx, u, lambda, opt);
  const Vector bu = bifurcation_fn(psi, ctx, u, lambda, opt);
  r.reduced_s0 = (reduced_map(psi, ctx, ctx.s0 * u, lambda, opt) - ctx.s0 * pu).norm();
  r.bifurcation_s0 = (bifurcation_fn(psi, ctx, ctx.s0 * u, lambda, opt) - ctx.s0 * bu).norm();
  r.vstar_shift =
      (solve_vstar(psi, ctx, ctx.s0 * u, lambda, opt).v - ctx.sigma * solve_vstar(psi, ctx, u, lambda, opt).v).norm();
  for (std::size_t g = 0; g < ctx.group.order(); ++g) {
    const Matrix& gm = ctx.group.elements[g];
    const double chi = ctx.group.chi[g];
    const double rg = chi > 0 ? (gm * pu - reduced_map(psi, ctx, gm * u, lambda, opt)).norm()
                              : (reduced_map(psi, ctx, gm * pu, lambda, opt) - gm * u).norm();
    r.reduced_group = std::max(r.reduced_group, rg);
    r.bifurcation_group =
        std::max(r.bifurcation_group, (bifurcation_fn(psi, ctx, gm * u, lambda, opt) - chi * gm * bu).norm());
    r.ghat_vstar = std::max(r.ghat_vstar, ghat_vstar_identity_check(psi, ctx, u, lambda, g, opt));
  }
  r.origin = reduced_map(psi, ctx, Vector::Zero(ctx.n), lambda, opt).norm();
  return r;
}

ReductionResult reduce(const MapFamily& psi, const LiftContext& ctx, const ReductionOptions& opt) {
  ReductionResult r;
  r.u_basis = ctx.u_basis;
  r.complement_basis = ctx.complement;
  r.radius = opt.radius;
  r.vstar = [psi, ctx, opt](const Vector& u, const Vector& l) { return solve_vstar(psi, ctx, u, l, opt).v; };
  r.reduced = [psi, ctx, opt](const Vector& u, const Vector& l) { return reduced_map(psi, ctx, u, l, opt); };
  r.xstar = [psi, ctx, opt](const Vector& u, const Vector& l) { return xstar(psi, ctx, u, l, opt); };
  return r;
}

std::vector<PeriodicPoint> find_periodic(const MapFamily& psi, const LiftContext& ctx,
                                         const std::vector<Vector>& lambda_grid, const PeriodicOptions& opt) {
  std::vector<PeriodicPoint> found;
  const Eigen::Index d = ctx.dim_u();
  if (d == 0) return found;
  const Matrix su = ctx.u_basis.transpose() * ctx.s0 * ctx.u_basis;
  const int grid = std::max(1, opt.grid);

  // Starting points: tensor grid over [-box, box]^d, origin excluded.
  std::vector<Vector> starts;
  std::vector<int> idx(d, 0);
  for (;;) {
    Vector c(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      c(i) = grid == 1 ? 0.0 : opt.box * (-1.0 + 2.0 * idx[i] / (grid - 1));
    }
    if (c.norm() > 0.0) starts.push_back(c);
    Eigen::Index i = 0;
    while (i < d && ++idx[i] == grid) idx[i++] = 0;
    if (i == d) break;
  }

  for (const Vector& lambda : lambda_grid) {
    std::vector<PeriodicPoint> here;
    auto add = [&](const Vector& c) {
      const Vector u = ctx.u_basis * c;
      PeriodicPoint p;
      p.lambda = lambda;
      // Canonical representative: lexicographically smallest of S0^j u.
      Vector best = u;
      Vector cur = u;
      for (int j = 1; j < ctx.q; ++j) {
        cur = ctx.s0 * cur;
        if (lex_less(cur, best, opt.dedup_tol)) best = cur;
      }
      for (const auto& e : here) {
        if ((e.u - best).norm() <= opt.dedup_tol * std::max(1.0, best.norm())) return;
      }
      p.u = best;
      p.coords = to_coords(ctx, best);
      const Vector f = to_coords(ctx, reduced_map(psi, ctx, best, lambda, opt.reduction)) - su * p.coords;
      p.determining_residual = f.norm();
      const Matrix jac = reduced_jacobian(psi, ctx, best, lambda, opt.reduction) - su;
      Eigen::JacobiSVD<Matrix> svd(jac);
      const Vector& sv = svd.singularValues();
      const double cut = opt.rank_tol * std::max(1.0, sv(0));
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= cut) ++p.nullity;
      p.isolated = p.nullity == 0;
      p.x = xstar(psi, ctx, best, lambda, opt.reduction);
      Vector y = p.x;
      for (int j = 0; j < ctx.q; ++j) {
        p.orbit.push_back(y);
        y = psi(y, lambda);
      }
      p.periodicity_residual = (y - p.x).norm();
      p.bifurcation_residual = bifurcation_fn(psi, ctx, best, lambda, opt.reduction).norm();
      here.push_back(std::move(p));
    };

    add(Vector::Zero(d));
    for (const Vector& s : starts) {
      Vector c = s;
      bool ok = false;
      try {
        double prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opt.max_iter; ++it) {
          const Vector u = ctx.u_basis * c;
          if (u.norm() > std::min(2.0 * opt.box * std::sqrt(static_cast<double>(d)), opt.reduction.radius)) break;
          const Vector f = to_coords(ctx, reduced_map(psi, ctx, u, lambda, opt.reduction)) - su * c;
          const double fn = f.norm();
          if (fn <= opt.tol * std::max(c.norm(), 1e-300) || fn == 0.0 || (fn >= prev && fn <= 1e-10)) {
            ok = fn <= 1e-10;
            break;
          }
          prev = fn;
          const Matrix jac = reduced_jacobian(psi, ctx, u, lambda, opt.reduction) - su;
          c -= pinv(jac, 1e-10) * f;
        }
      } catch (const Error&) {
        ok = false;
      }
      if (ok) add(c);
    }
    std::sort(here.begin(), here.end(),
              [&](const PeriodicPoint& a, const PeriodicPoint& b) { return lex_less(a.u, b.u, 0.0); });
    for (std::size_t i = 0; i < here.size(); ++i) {
      here[i].orbit_id = static_cast<int>(i);
      found.push_back(std::move(here[i]));
    }
  }
  return found;
}

MapFamily normalized_family(const MapFamily& psi, const NormalFormResult& nf, std::size_t sample) {
  return conjugated_family(psi, nf.samples.at(sample).transform);
}

ConsistencyReport nf_reduction_consistency(const MapFamily& psi, const NormalFormResult& nf, const LiftContext& ctx,
                                           int k, std::size_t sample, double rmin, double rmax, double slack,
                                           bool enforce) {
  const NormalFormSample& s = nf.samples.at(sample);
  const Vector& lambda = s.lambda;
  const TruncatedMapd model = nf.base() * exp_vf(nf.full_exponent(sample), k);
  ConsistencyReport rep;
  rep.required_slope = k + 1 - slack;

  std::vector<Vector> dirs;
  for (Eigen::Index i = 0; i < ctx.dim_u(); ++i) dirs.push_back(ctx.u_basis.col(i));
  if (ctx.dim_u() > 1) dirs.push_back(ctx.u_basis.rowwise().sum().normalized());
  const int npts = 7;
  ReductionOptions ropt;
  ropt.radius = std::max(ropt.radius, 2 * rmax);
  double max_rel = 0.0;
  for (int i = 0; i < npts; ++i) {
    const double r = rmin * std::pow(rmax / rmin, static_cast<double>(i) / (npts - 1));
    double diff = 0.0;
    for (const auto& dvec : dirs) {
      const Vector u = r * dvec;
      diff = std::max(diff, (reduced_map(psi, ctx, u, lambda, ropt) - model(u)).norm());
    }
    rep.radii.push_back(r);
    rep.differences.push_back(diff);
    max_rel = std::max(max_rel, diff / r);
  }
  // Least-squares slope in log-log coordinates.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    if (rep.differences[i] <= 0.0) continue;
    const double x = std::log(rep.radii[i]), y = std::log(rep.differences[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++cnt;
  }
  rep.slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::numeric_limits<double>::infinity();
  // An exact normal form leaves only rounding: treat that as consistent.
  const bool at_rounding = max_rel <= 1e-13;
  rep.passed = rep.slope >= rep.required_slope || at_rounding;

  // Spectrum of D psi_r(0) against the spectrum of the linear part on U.
  const Matrix dr = reduced_jacobian(psi, ctx, Vector::Zero(ctx.n), lambda, ropt);
  const Matrix au = ctx.u_basis.transpose() * psi.linear_part(lambda) * ctx.u_basis;
  if (dr.size() > 0) {
    ComplexVector e1 = Eigen::EigenSolver<Matrix>(dr).eigenvalues();
    ComplexVector e2 = Eigen::EigenSolver<Matrix>(au).eigenvalues();
    std::vector<bool> used(e2.size(), false);
    for (Eigen::Index i = 0; i < e1.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index bi = 0;
      for (Eigen::Index j = 0; j < e2.size(); ++j) {
        if (used[j]) continue;
        const double dist = std::abs(e1(i) - e2(j));
        if (dist < best) best = dist, bi = j;
      }
      used[bi] = true;
      rep.eigenvalue_mismatch = std::max(rep.eigenvalue_mismatch, best);
    }
  }
  if (enforce && !rep.passed) {
    throw Error(ErrorCode::SlopeTestFailed, "reduced map deviates from the normal form too fast", rep.slope);
  }
  return rep;
}

}  // namespace eqnf
