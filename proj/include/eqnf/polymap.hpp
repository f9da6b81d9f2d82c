#pragma once

#include "eqnf/group.hpp"
#include "eqnf/monomials.hpp"
#include "eqnf/types.hpp"

#include <Eigen/LU>

#include <memory>

namespace eqnf {

/// Polynomial map R^n -> R^n of degree <= k without constant term. The n x M
/// coefficient matrix has one column per monomial of the space (n, k);
/// column 0 is the constant monomial and stays zero. Layers are column
/// blocks.
template <typename Scalar_>
class TruncatedMap {
 public:
  using Scalar = Scalar_;
  using CoeffMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  TruncatedMap() = default;
  TruncatedMap(int n, int k) : space_(monomial_space(n, k)), coeffs_(CoeffMatrix::Zero(n, space_->size())) {}

  static TruncatedMap zero(int n, int k) { return TruncatedMap(n, k); }

  template <typename Derived>
  static TruncatedMap linear(const Eigen::MatrixBase<Derived>& a, int k) {
    TruncatedMap f(static_cast<int>(a.rows()), k);
    if (k >= 1) f.layer(1) = a.template cast<Scalar>();
    return f;
  }

  static TruncatedMap identity(int n, int k) { return linear(CoeffMatrix::Identity(n, n), k); }

  int dim() const { return space_ ? space_->nvars() : 0; }
  int order() const { return space_ ? space_->max_degree() : 0; }
  const MonomialSpace& space() const { return *space_; }
  std::shared_ptr<const MonomialSpace> space_ptr() const { return space_; }

  const CoeffMatrix& coeffs() const { return coeffs_; }
  CoeffMatrix& coeffs() { return coeffs_; }

  auto layer(int d) { return coeffs_.middleCols(space_->offset(d), space_->count(d)); }
  auto layer(int d) const { return coeffs_.middleCols(space_->offset(d), space_->count(d)); }

  CoeffMatrix linear_part() const { return layer(1); }

  Scalar& coeff(int comp, const MultiIndex& alpha) { return coeffs_(comp, checked_index(alpha)); }
  Scalar coeff(int comp, const MultiIndex& alpha) const { return coeffs_(comp, checked_index(alpha)); }

  /// Layer d flattened column-major: entry comp + n * (local monomial index).
  VectorType layer_vector(int d) const {
    const CoeffMatrix l = layer(d);
    return Eigen::Map<const VectorType>(l.data(), l.size());
  }
  template <typename Derived>
  void set_layer_vector(int d, const Eigen::MatrixBase<Derived>& v) {
    const VectorType vv = v;
    layer(d) = Eigen::Map<const CoeffMatrix>(vv.data(), dim(), space_->count(d));
  }

  /// Monomial values x^alpha for every alpha of the space.
  VectorType monomials(const VectorType& x) const {
    const MonomialSpace& s = *space_;
    VectorType val(s.size());
    val(0) = Scalar(1);
    for (int i = 1; i < s.size(); ++i) {
      const MultiIndex& a = s.exponent(i);
      int v = 0;
      while (a[v] == 0) ++v;
      val(i) = val(s.lowered(i, v)) * x(v);
    }
    return val;
  }

  VectorType operator()(const VectorType& x) const { return coeffs_ * monomials(x); }

  CoeffMatrix jacobian(const VectorType& x) const {
    const MonomialSpace& s = *space_;
    const VectorType val = monomials(x);
    CoeffMatrix j = CoeffMatrix::Zero(dim(), dim());
    for (int i = 1; i < s.size(); ++i) {
      for (int v = 0; v < dim(); ++v) {
        const int lo = s.lowered(i, v);
        if (lo >= 0) j.col(v) += coeffs_.col(i) * (Scalar(s.exponent(i)[v]) * val(lo));
      }
    }
    return j;
  }

  /// Same coefficients in the space of order k (dropping or zero-padding).
  TruncatedMap truncated(int k) const {
    TruncatedMap out(dim(), k);
    for (int d = 1; d <= std::min(k, order()); ++d) out.layer(d) = layer(d);
    return out;
  }

  /// Keeps only the layer of degree d.
  TruncatedMap homogeneous_part(int d) const {
    TruncatedMap out(dim(), order());
    if (d >= 1 && d <= order()) out.layer(d) = layer(d);
    return out;
  }

  TruncatedMap& operator+=(const TruncatedMap& o) {
    check_compatible(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  TruncatedMap& operator-=(const TruncatedMap& o) {
    check_compatible(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  TruncatedMap& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }
  friend TruncatedMap operator+(TruncatedMap a, const TruncatedMap& b) { return a += b; }
  friend TruncatedMap operator-(TruncatedMap a, const TruncatedMap& b) { return a -= b; }
  friend TruncatedMap operator-(TruncatedMap a) { return a *= Scalar(-1); }
  friend TruncatedMap operator*(Scalar s, TruncatedMap a) { return a *= s; }

  /// Post-composition with a linear map: x -> A F(x).
  template <typename Derived>
  friend TruncatedMap operator*(const Eigen::MatrixBase<Derived>& a, const TruncatedMap& f) {
    TruncatedMap out = f;
    out.coeffs_ = a.template cast<Scalar>() * f.coeffs_;
    return out;
  }

  void check_compatible(const TruncatedMap& o) const {
    if (o.dim() != dim() || o.order() != order()) {
      throw Error(ErrorCode::DimensionMismatch, "truncated maps differ in dimension or order");
    }
  }

 private:
  int checked_index(const MultiIndex& alpha) const {
    const int i = space_->index_of(alpha);
    if (i < 0) throw Error(ErrorCode::DimensionMismatch, "multi-index outside the monomial space");
    return i;
  }

  std::shared_ptr<const MonomialSpace> space_;
  CoeffMatrix coeffs_;
};

using TruncatedMapd = TruncatedMap<double>;

/// Largest coefficient magnitude.
template <typename Scalar>
double max_coeff(const TruncatedMap<Scalar>& f) {
  return max_abs(f.coeffs());
}

namespace detail {

// Product of two scalar polynomials stored as rows over the same space,
// truncated at the top degree.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> poly_mul(const MonomialSpace& s,
                                                  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic>& a,
                                                  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic>& b) {
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> r = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (a(i) == Scalar(0)) continue;
    for (int j = 0; j < s.size(); ++j) {
      if (b(j) == Scalar(0)) continue;
      const int p = s.product(i, j);
      if (p >= 0) r(p) += a(i) * b(j);
    }
  }
  return r;
}

}  // namespace detail

/// Row alpha holds the coefficients of G(x)^alpha, truncated at the order of
/// G. Row 0 is the constant 1.
template <typename Scalar>
typename TruncatedMap<Scalar>::CoeffMatrix power_table(const TruncatedMap<Scalar>& g) {
  using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  const MonomialSpace& s = g.space();
  typename TruncatedMap<Scalar>::CoeffMatrix p = TruncatedMap<Scalar>::CoeffMatrix::Zero(s.size(), s.size());
  p(0, 0) = Scalar(1);
  for (int i = 1; i < s.size(); ++i) {
    const MultiIndex& a = s.exponent(i);
    int v = 0;
    while (a[v] == 0) ++v;
    const Row prev = p.row(s.lowered(i, v));
    const Row gv = g.coeffs().row(v);
    p.row(i) = detail::poly_mul<Scalar>(s, prev, gv);
  }
  return p;
}

/// F o G modulo degree k + 1.
template <typename Scalar>
TruncatedMap<Scalar> compose(const TruncatedMap<Scalar>& f, const TruncatedMap<Scalar>& g, int k) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "compose: dimensions differ");
  if (f.order() < k || g.order() < k) throw Error(ErrorCode::DimensionMismatch, "compose: truncation below k");
  const TruncatedMap<Scalar> gk = g.truncated(k);
  TruncatedMap<Scalar> out(f.dim(), k);
  out.coeffs() = f.truncated(k).coeffs() * power_table(gk);
  return out;
}

template <typename Scalar>
TruncatedMap<Scalar> compose(const TruncatedMap<Scalar>& f, const TruncatedMap<Scalar>& g) {
  return compose(f, g, std::min(f.order(), g.order()));
}

/// (DY . X)(x) truncated at the order of Y. X must share the space of Y.
template <typename Scalar>
TruncatedMap<Scalar> lie_derivative(const TruncatedMap<Scalar>& y, const TruncatedMap<Scalar>& x) {
  using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  y.check_compatible(x);
  const MonomialSpace& s = y.space();
  const int n = y.dim();
  TruncatedMap<Scalar> out(n, y.order());
  for (int v = 0; v < n; ++v) {
    const Row xv = x.coeffs().row(v);
    for (int c = 0; c < n; ++c) {
      Row dv = Row::Zero(s.size());
      for (int i = 1; i < s.size(); ++i) {
        const int lo = s.lowered(i, v);
        if (lo >= 0) dv(lo) += Scalar(s.exponent(i)[v]) * y.coeffs()(c, i);
      }
      out.coeffs().row(c) += detail::poly_mul<Scalar>(s, dv, xv);
    }
  }
  return out;
}

/// Formal inverse modulo degree k + 1.
template <typename Scalar>
TruncatedMap<Scalar> inverse_truncated(const TruncatedMap<Scalar>& f, int k) {
  using CoeffMatrix = typename TruncatedMap<Scalar>::CoeffMatrix;
  const TruncatedMap<Scalar> fk = f.truncated(k);
  Eigen::FullPivLU<CoeffMatrix> lu(fk.linear_part());
  if (!lu.isInvertible()) throw Error(ErrorCode::NonInvertibleLinearPart, "linear part is singular");
  const CoeffMatrix ainv = lu.inverse();
  const TruncatedMap<Scalar> id = TruncatedMap<Scalar>::identity(f.dim(), k);
  TruncatedMap<Scalar> g = TruncatedMap<Scalar>::linear(ainv, k);
  // Each sweep fixes one more degree.
  for (int it = 1; it < k; ++it) {
    const TruncatedMap<Scalar> r = compose(fk, g, k) - id;
    g -= ainv * r;
  }
  return g;
}

template <typename Scalar>
TruncatedMap<Scalar> inverse_truncated(const TruncatedMap<Scalar>& f) {
  return inverse_truncated(f, f.order());
}

/// T o F o T^{-1} modulo degree k + 1.
template <typename Scalar>
TruncatedMap<Scalar> ad_conjugate(const TruncatedMap<Scalar>& t, const TruncatedMap<Scalar>& f, int k) {
  return compose(compose(t.truncated(k), f.truncated(k), k), inverse_truncated(t, k), k);
}

/// Time-one flow of the vector field X modulo degree k + 1.
TruncatedMapd exp_vf(const TruncatedMapd& x, int k);
inline TruncatedMapd exp_vf(const TruncatedMapd& x) { return exp_vf(x, x.order()); }

/// Vector field X with exp_vf(X) = F modulo degree k + 1. Throws
/// NoRealLogarithm when the linear part has no real logarithm.
TruncatedMapd log_map(const TruncatedMapd& f, int k);
inline TruncatedMapd log_map(const TruncatedMapd& f) { return log_map(f, f.order()); }

/// g o F o g^{-1} = F^{chi(g)} modulo degree k + 1 for every g; the inverse
/// is the formal one. Throws NonInvertibleLinearPart.
bool is_chi_equivariant_map(const TruncatedMapd& f, const GroupData& gd, int k, double tol = 1e-9);

/// Largest deviation max_g |g o F o g^{-1} - F^{chi(g)}| over coefficients.
double chi_equivariance_defect(const TruncatedMapd& f, const GroupData& gd, int k);

}  // namespace eqnf
