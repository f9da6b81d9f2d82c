#include "eqnf/polymap.hpp"

#include "eqnf/hk_operators.hpp"

#include <cmath>

namespace eqnf {

TruncatedMapd exp_vf(const TruncatedMapd& x, int k) {
  const int n = x.dim();
  const TruncatedMapd xk = x.truncated(k);
  // Lie series sum_m L^m(id)/m!, L g = Dg . X. When X1 != 0 the series is
  // infinite in every degree, so scale X down first and square afterwards.
  const double nrm = k >= 1 ? xk.linear_part().norm() : 0.0;
  int squarings = 0;
  while (nrm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const TruncatedMapd xs = std::ldexp(1.0, -squarings) * xk;

  TruncatedMapd sum = TruncatedMapd::identity(n, k);
  TruncatedMapd term = sum;
  int quiet = 0;
  for (int m = 1; m <= 400; ++m) {
    term = (1.0 / m) * lie_derivative(term, xs);
    sum += term;
    const double t = max_coeff(term);
    if (t == 0.0 || t <= 1e-18 * std::max(1.0, max_coeff(sum))) {
      if (++quiet >= 2 && m > k) break;
    } else {
      quiet = 0;
    }
  }
  for (int s = 0; s < squarings; ++s) sum = compose(sum, sum, k);
  return sum;
}

TruncatedMapd log_map(const TruncatedMapd& f, int k) {
  const TruncatedMapd fk = f.truncated(k);
  const Matrix a = fk.linear_part();
  Matrix x1;
  try {
    x1 = matrix_log_unipotent(a, 1e-10);
  } catch (const Error&) {
    x1 = matrix_log(a);
  }
  TruncatedMapd x = TruncatedMapd::linear(x1, k);
  if (k < 2) return x;
  const Matrix ex1_inv = matrix_exp(-x1);
  // The degree-j layer of exp(X) is affine in X_j with linear part
  // e^{X1} C_j(X1); lower layers are already fixed.
  for (int j = 2; j <= k; ++j) {
    const TruncatedMapd e = exp_vf(x.truncated(j), j);
    const Matrix gap = fk.layer(j) - e.layer(j);
    const Matrix rhs = ex1_inv * gap;
    const Vector rv = Eigen::Map<const Vector>(rhs.data(), rhs.size());
    const Vector z = solve_ck(ck_operator(x1, j), rv);
    x.set_layer_vector(j, x.layer_vector(j) + z);
  }
  return x;
}

double chi_equivariance_defect(const TruncatedMapd& f, const GroupData& gd, int k) {
  require_same_dim(f.dim(), gd.dim(), "chi_equivariance_defect");
  const TruncatedMapd fk = f.truncated(k);
  TruncatedMapd finv;
  bool have_inv = false;
  double worst = 0.0;
  for (std::size_t i = 0; i < gd.order(); ++i) {
    const TruncatedMapd g = TruncatedMapd::linear(gd.elements[i], k);
    const TruncatedMapd lhs = ad_conjugate(g, fk, k);
    if (gd.chi[i] > 0) {
      worst = std::max(worst, max_coeff(lhs - fk));
    } else {
      if (!have_inv) {
        finv = inverse_truncated(fk, k);
        have_inv = true;
      }
      worst = std::max(worst, max_coeff(lhs - finv));
    }
  }
  return worst;
}

bool is_chi_equivariant_map(const TruncatedMapd& f, const GroupData& gd, int k, double tol) {
  return chi_equivariance_defect(f, gd, k) <= tol * std::max(1.0, max_coeff(f));
}

}  // namespace eqnf
