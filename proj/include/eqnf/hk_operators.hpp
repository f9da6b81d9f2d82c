#pragma once

#include "eqnf/group.hpp"
#include "eqnf/polymap.hpp"

namespace eqnf {

/// Linear operator on H_k, the homogeneous degree-k maps, acting on the
/// column-major flattening of a layer (index comp + n * monomial).
struct HkOperator {
  int degree = 0;
  Matrix matrix;

  Vector operator()(const Vector& v) const { return matrix * v; }
};

/// n * C(n + k - 1, k).
Eigen::Index hk_dimension(int n, int k);

/// Count x count matrix P(M) with row alpha = coefficients of (M x)^alpha,
/// so that the layer of Y o M is Y * P(M).
Matrix substitution_matrix(const Matrix& m, int k);

/// Matrix D(N) such that the layer of DY . N x is Y * D(N).
Matrix derivation_matrix(const Matrix& nmat, int k);

/// Y -> T o Y o T^{-1}.
HkOperator adk_operator(const Matrix& t, int k);

/// ad_k(N) Y = N o Y - DY . N.
HkOperator ad_operator(const Matrix& nmat, int k);

/// Y -> A o Y.
HkOperator lmul_operator(const Matrix& a, int k);

/// C_k(X1) = int_0^1 Ad_k(e^{-s X1}) ds.
HkOperator ck_operator(const Matrix& x1, int k);

/// (1/|G|) sum alpha(g) Ad_k(g).
HkOperator hk_projection(const GroupData& gd, const Character& alpha, int k);

/// Fischer inner product on H_k transported by the adapted inner product:
/// monomials of the orthonormal coordinates are orthogonal with weight alpha!.
Matrix fischer_gram(int n, int k, const AdaptedInnerProduct& ip);

enum class ChSide { Left, Right };

/// Combined exponent Z with exp(Z) = exp(X) o exp(Yk) (Left) or
/// exp(Yk) o exp(X) (Right) modulo degree k + 1. Yk must be homogeneous of
/// degree k. Throws CkSingular when the C_k operator cannot be inverted.
TruncatedMapd ch_compose(const TruncatedMapd& x, const TruncatedMapd& yk, int k, ChSide side = ChSide::Left);

/// Solves C v = rhs, throwing CkSingular when C is numerically singular.
Vector solve_ck(const HkOperator& c, const Vector& rhs);
Matrix solve_ck(const HkOperator& c, const Matrix& rhs);

}  // namespace eqnf
