#include "eqnf/hk_operators.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace eqnf {

Eigen::Index hk_dimension(int n, int k) { return static_cast<Eigen::Index>(n) * monomial_count(n, k); }

Matrix substitution_matrix(const Matrix& m, int k) {
  require_square(m, "substitution_matrix");
  const TruncatedMapd lin = TruncatedMapd::linear(m, k);
  const Matrix p = power_table(lin);
  const MonomialSpace& s = lin.space();
  return p.block(s.offset(k), s.offset(k), s.count(k), s.count(k));
}

Matrix derivation_matrix(const Matrix& nmat, int k) {
  require_square(nmat, "derivation_matrix");
  const int n = static_cast<int>(nmat.rows());
  const auto sp = monomial_space(n, k);
  const MonomialSpace& s = *sp;
  const int off = s.offset(k);
  Matrix d = Matrix::Zero(s.count(k), s.count(k));
  for (int a = 0; a < s.count(k); ++a) {
    const int i = off + a;
    for (int v = 0; v < n; ++v) {
      const int lo = s.lowered(i, v);
      if (lo < 0) continue;
      for (int w = 0; w < n; ++w) {
        d(a, s.raised(lo, w) - off) += s.exponent(i)[v] * nmat(v, w);
      }
    }
  }
  return d;
}

HkOperator adk_operator(const Matrix& t, int k) {
  require_square(t, "adk_operator");
  if (!is_invertible(t)) throw Error(ErrorCode::SingularInput, "Ad_k needs an invertible matrix");
  const Matrix p = substitution_matrix(t.inverse(), k);
  return {k, Eigen::kroneckerProduct(p.transpose(), t)};
}

HkOperator ad_operator(const Matrix& nmat, int k) {
  require_square(nmat, "ad_operator");
  const Eigen::Index n = nmat.rows();
  const Matrix d = derivation_matrix(nmat, k);
  const Eigen::Index c = d.rows();
  Matrix m = Eigen::kroneckerProduct(Matrix::Identity(c, c), nmat);
  m -= Eigen::kroneckerProduct(d.transpose(), Matrix::Identity(n, n));
  return {k, m};
}

HkOperator lmul_operator(const Matrix& a, int k) {
  const Eigen::Index c = monomial_count(static_cast<int>(a.rows()), k);
  return {k, Eigen::kroneckerProduct(Matrix::Identity(c, c), a)};
}

HkOperator ck_operator(const Matrix& x1, int k) {
  // The integrand is exp(s L) with L = -ad_k(X1), so C_k = phi(L),
  // phi(z) = (e^z - 1)/z: the upper-right block of exp([[L, I], [0, 0]]).
  const Matrix l = -ad_operator(x1, k).matrix;
  const Eigen::Index d = l.rows();
  Matrix big = Matrix::Zero(2 * d, 2 * d);
  big.topLeftCorner(d, d) = l;
  big.topRightCorner(d, d) = Matrix::Identity(d, d);
  const Matrix e = big.exp();
  return {k, e.topRightCorner(d, d)};
}

HkOperator hk_projection(const GroupData& gd, const Character& alpha, int k) {
  const Eigen::Index dim = hk_dimension(static_cast<int>(gd.dim()), k);
  Matrix acc = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < gd.order(); ++i) acc += alpha[i] * adk_operator(gd.elements[i], k).matrix;
  return {k, acc / static_cast<double>(gd.order())};
}

Matrix fischer_gram(int n, int k, const AdaptedInnerProduct& ip) {
  require_same_dim(n, ip.dim(), "fischer_gram");
  const auto sp = monomial_space(n, k);
  const int c = sp->count(k);
  Vector w(c);
  for (int a = 0; a < c; ++a) w(a) = sp->factorial(sp->offset(k) + a);
  const Matrix weight = Eigen::kroneckerProduct(Matrix(w.asDiagonal()), Matrix::Identity(n, n));
  const Matrix ad = adk_operator(ip.orthonormalizer(), k).matrix;
  return ad.transpose() * weight * ad;
}

Matrix solve_ck(const HkOperator& c, const Matrix& rhs) {
  Eigen::JacobiSVD<Matrix> svd(c.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double ratio = sv.size() ? sv(sv.size() - 1) / std::max(sv(0), 1e-300) : 1.0;
  if (ratio < 1e-13) throw Error(ErrorCode::CkSingular, "C_k operator is numerically singular", ratio);
  return svd.solve(rhs);
}

Vector solve_ck(const HkOperator& c, const Vector& rhs) { return solve_ck(c, Matrix(rhs)).col(0); }

TruncatedMapd ch_compose(const TruncatedMapd& x, const TruncatedMapd& yk, int k, ChSide side) {
  require_same_dim(x.dim(), yk.dim(), "ch_compose");
  if (yk.order() < k) throw Error(ErrorCode::DimensionMismatch, "ch_compose: Yk has no degree-k layer");
  for (int d = 1; d <= yk.order(); ++d) {
    if (d != k && max_abs(yk.layer(d)) > 0.0) {
      throw Error(ErrorCode::DimensionMismatch, "ch_compose: Yk must be homogeneous of degree k");
    }
  }
  const Matrix x1 = x.order() >= 1 ? x.linear_part() : Matrix::Zero(x.dim(), x.dim());
  const HkOperator c = ck_operator(side == ChSide::Left ? x1 : Matrix(-x1), k);
  TruncatedMapd out = x.truncated(k);
  const Vector z = solve_ck(c, yk.layer_vector(k));
  out.set_layer_vector(k, out.layer_vector(k) + z);
  return out;
}

}  // namespace eqnf
