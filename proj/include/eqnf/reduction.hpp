#pragma once

#include "eqnf/family.hpp"
#include "eqnf/group.hpp"
#include "eqnf/normalform.hpp"
#include "eqnf/subspace.hpp"

#include <vector>

namespace eqnf {

/// Lift of the linear data to Y_q, the q-periodic sequences (x_0, ..., x_{q-1})
/// stored as consecutive blocks of length n.
struct LiftContext {
  int q = 1;
  int n = 0;
  Matrix sigma;               // (sigma x)_i = x_{i+1}
  Matrix s0_hat;              // block-diagonal S0
  Matrix a0_hat;              // block-diagonal A0
  std::vector<Matrix> g_hat;  // (g^ x)_i = g x_{chi(g) i}
  GroupData group;
  Matrix s0;
  Matrix a0;
  Matrix u_basis;     // orthonormal basis of U = ker(S0^q - I) in R^n
  Matrix xi_basis;    // xi applied to the columns of u_basis
  Matrix complement;  // orthonormal basis of Im(S0^ - sigma)
  SplitSubspaces split;  // Y_q = xi(U) (+) Im(S0^ - sigma)

  Eigen::Index dim_u() const { return u_basis.cols(); }
  Eigen::Index dim_y() const { return static_cast<Eigen::Index>(q) * n; }
};

/// Residuals of the lift identities; all are checked by build_lift.
struct LiftReport {
  double sigma_period = 0.0;   // |sigma^q - I|
  double g_sigma = 0.0;        // |g^ sigma - sigma^chi g^|
  double representation = 0.0;  // |(g1 g2)^ - g1^ g2^|
  double sigma_s0 = 0.0;       // |sigma S0^ - S0^ sigma|
  double xi_shift = 0.0;       // |xi(S0 u) - sigma xi(u)|
  double xi_a0 = 0.0;          // |xi(A0 u) - A0^ xi(u)|
  double xi_g = 0.0;           // |g^ xi(u) - xi(g u)|
};

/// Throws InvariantViolation naming the failed identity.
LiftContext build_lift(const Matrix& a0, const Matrix& s0, const GroupData& gd, int q);
LiftReport lift_report(const LiftContext& ctx);

/// Tolerance on |(S0^q - I) u| relative to max(|u|, 1) for membership in U.
inline constexpr double kInUTol = 1e-9;

/// xi(u) = (S0^i u)_i. Throws NotInU.
Vector xi(const Vector& u, const LiftContext& ctx);

/// psi^ applied entrywise to a sequence.
Vector lift_map(const MapFamily& psi, const Vector& y, const Vector& lambda, int q);

struct ReductionOptions {
  int max_iter = 60;
  double radius = 0.1;  // trust radius for |u|
};

/// Solution of the complement equation sigma v = Sigma_lambda(u, v).
struct VStar {
  Vector v;                // in Y_q
  double residual = 0.0;   // |Sigma(u, v) - sigma v|
  int iterations = 0;
};

VStar solve_vstar(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                  const ReductionOptions& opt = {});

/// psi_{r,lambda}(u) in U, as a vector of R^n.
Vector reduced_map(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                   const ReductionOptions& opt = {});

/// D_u psi_{r,lambda}(u) in the coordinates of u_basis (implicit differentiation).
Matrix reduced_jacobian(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                        const ReductionOptions& opt = {});

/// psi_{r,lambda}^{-1}(u) by Newton. Throws InverseNewtonFailed.
Vector reduced_inverse(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                       const ReductionOptions& opt = {});

/// x*(u, lambda) = entry 0 of xi(u) + v*(u, lambda).
Vector xstar(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
             const ReductionOptions& opt = {});

/// B(u, lambda) = S0^{-1} psi_r(u) - S0 psi_r^{-1}(u).
Vector bifurcation_fn(const MapFamily& psi, const LiftContext& ctx, const Vector& u, const Vector& lambda,
                      const ReductionOptions& opt = {});

/// |g^ v*(u) - sigma^{(1-chi)/2} v*(g psi_r^{(1-chi)/2}(u))| for group element `g_index`.
double ghat_vstar_identity_check(const MapFamily& psi, const LiftContext& ctx, const Vector& u,
                                 const Vector& lambda, std::size_t g_index, const ReductionOptions& opt = {});

/// Residuals of the reduction identities at one point u of U: S0- and
/// group-equivariance of psi_r and B, the shift property of v*, the g^ v*
/// identity (worst over the group) and psi_r(0) = 0.
struct ReductionInvariants {
  double reduced_s0 = 0.0;      // |psi_r(S0 u) - S0 psi_r(u)|
  double reduced_group = 0.0;   // |g psi_r(u) - psi_r(g u)|, or |psi_r(g psi_r(u)) - g u| when chi(g) = -1
  double bifurcation_s0 = 0.0;  // |B(S0 u) - S0 B(u)|
  double bifurcation_group = 0.0;  // |B(g u) - chi(g) g B(u)|
  double vstar_shift = 0.0;     // |v*(S0 u) - sigma v*(u)|
  double ghat_vstar = 0.0;
  double origin = 0.0;          // |psi_r(0)|

  double worst() const;
};

ReductionInvariants reduction_invariants(const MapFamily& psi, const LiftContext& ctx, const Vector& u,
                                         const Vector& lambda, const ReductionOptions& opt = {});

/// Bundled evaluators for one family and lift.
struct ReductionResult {
  Matrix u_basis;
  Matrix complement_basis;
  std::function<Vector(const Vector&, const Vector&)> vstar;
  std::function<Vector(const Vector&, const Vector&)> reduced;
  std::function<Vector(const Vector&, const Vector&)> xstar;
  double radius = 0.0;
};

ReductionResult reduce(const MapFamily& psi, const LiftContext& ctx, const ReductionOptions& opt = {});

struct PeriodicOptions {
  double box = 0.05;          // half-width of the search box in u_basis coordinates
  int grid = 5;               // starting points per coordinate
  double tol = 1e-12;         // determining-equation residual, relative to |u|
  double rank_tol = 1e-6;     // singular values below rank_tol * max(1, sigma_max) flag a continuum
  double dedup_tol = 1e-7;
  int max_iter = 60;
  ReductionOptions reduction;
};

struct PeriodicPoint {
  Vector lambda;
  Vector u;                    // canonical representative in R^n
  Vector coords;               // coordinates of u in u_basis
  Vector x;                    // x*(u, lambda)
  std::vector<Vector> orbit;   // x, psi(x), ..., psi^{q-1}(x)
  double determining_residual = 0.0;
  double periodicity_residual = 0.0;  // |psi^q(x) - x|
  double bifurcation_residual = 0.0;  // |B(u)|
  bool isolated = true;
  Eigen::Index nullity = 0;
  int orbit_id = 0;
};

/// Multi-start Gauss-Newton on psi_r(u) = S0 u over a grid of starts in the box,
/// for each lambda. Non-isolated solution families are flagged via the rank of
/// the Jacobian.
std::vector<PeriodicPoint> find_periodic(const MapFamily& psi, const LiftContext& ctx,
                                         const std::vector<Vector>& lambda_grid, const PeriodicOptions& opt = {});

/// Comparison of the reduced map with the normal-form prediction.
struct ConsistencyReport {
  std::vector<double> radii;
  std::vector<double> differences;  // max over directions of |psi_r(u) - psi_NF(u)|
  double slope = 0.0;
  double required_slope = 0.0;
  double eigenvalue_mismatch = 0.0;  // spectrum of D psi_r(0) vs spectrum of A on U
  bool passed = false;
};

/// psi_NF = base o exp(full exponent) of sample `sample`; psi must be the
/// normalized family. Throws SlopeTestFailed when `enforce` is set and the
/// slope is below k + 1 - slack.
ConsistencyReport nf_reduction_consistency(const MapFamily& psi, const NormalFormResult& nf, const LiftContext& ctx,
                                           int k, std::size_t sample = 0, double rmin = 1e-4, double rmax = 1e-2,
                                           double slack = 0.2, bool enforce = false);

/// Phi o psi o Phi^{-1} for the transform of a normal-form sample.
MapFamily normalized_family(const MapFamily& psi, const NormalFormResult& nf, std::size_t sample = 0);

}  // namespace eqnf
