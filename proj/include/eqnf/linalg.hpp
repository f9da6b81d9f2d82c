#pragma once

#include "eqnf/types.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <optional>

namespace eqnf {

/// A = S + N with S semisimple, N nilpotent and SN = NS.
struct JCDecomposition {
  Matrix semisimple;
  Matrix nilpotent;
};

/// A = S exp(L) with S semisimple, L nilpotent and SL = LS.
struct SUDecomposition {
  Matrix semisimple;
  Matrix nil_log;
};

/// Scalar product <x, y> = x^T G y with G symmetric positive definite. The
/// induced involution is A* = G^{-1} A^T G.
class AdaptedInnerProduct {
 public:
  explicit AdaptedInnerProduct(Matrix gram);

  static AdaptedInnerProduct standard(Eigen::Index n) { return AdaptedInnerProduct(Matrix::Identity(n, n)); }

  const Matrix& gram() const { return gram_; }
  Eigen::Index dim() const { return gram_.rows(); }

  double operator()(const Vector& x, const Vector& y) const { return x.dot(gram_ * y); }

  /// Matrix T with T^T T = G, i.e. z = T x are orthonormal coordinates.
  const Matrix& orthonormalizer() const { return chol_upper_; }

 private:
  Matrix gram_;
  Matrix chol_upper_;
};

template <typename Derived>
Matrix adjoint_wrt(const AdaptedInnerProduct& ip, const Eigen::MatrixBase<Derived>& a) {
  require_same_dim(ip.dim(), a.rows(), "adjoint_wrt");
  return ip.gram().ldlt().solve(a.transpose() * ip.gram());
}

/// Default rank cut-off: max(rows, cols) * eps * sigma_max * 1e3.
inline double default_rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sigma_max * 1e3;
}

namespace detail {

inline double rank_cutoff(const Eigen::JacobiSVD<Matrix>& svd, Eigen::Index rows, Eigen::Index cols,
                          std::optional<double> tol) {
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return tol ? *tol : default_rank_tolerance(rows, cols, smax);
}

}  // namespace detail

/// Orthonormal basis (as columns) of ker L.
template <typename Derived>
Matrix kernel_basis(const Eigen::MatrixBase<Derived>& l, std::optional<double> tol = std::nullopt) {
  const Matrix m = l;
  if (m.cols() == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const double cut = detail::rank_cutoff(svd, m.rows(), m.cols(), tol);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > cut) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

/// Orthonormal basis (as columns) of Im L.
template <typename Derived>
Matrix image_basis(const Eigen::MatrixBase<Derived>& l, std::optional<double> tol = std::nullopt) {
  const Matrix m = l;
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const double cut = detail::rank_cutoff(svd, m.rows(), m.cols(), tol);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > cut) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

template <typename Derived>
Matrix matrix_power(const Eigen::MatrixBase<Derived>& a, int p) {
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  if (p < 0) {
    base = base.inverse().eval();
    p = -p;
  }
  while (p > 0) {
    if (p & 1) result = result * base;
    base = base * base;
    p >>= 1;
  }
  return result;
}

/// Largest absolute entry; the norm used for all coefficient residuals.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
}

JCDecomposition jordan_chevalley(const Matrix& a);
SUDecomposition su_decomposition(const Matrix& a);

/// Scaling and squaring with a Pade approximant.
Matrix matrix_exp(const Matrix& a);

/// Finite series sum_{j<=n} (-1)^{j+1} (U-I)^j / j. Throws NotUnipotent when
/// |(U - I)^n| exceeds tol * |U - I|^n.
Matrix matrix_log_unipotent(const Matrix& u, double tol = 1e-10);

/// Principal real logarithm. Throws NoRealLogarithm when an eigenvalue lies
/// on the closed negative real axis.
Matrix matrix_log(const Matrix& a);

/// Semisimplicity test: every cluster of eigenvalues has full geometric
/// multiplicity.
bool is_semisimple(const Matrix& s, double cluster_tol = 1e-5, double null_tol = 1e-6);

/// Condition number of the complex eigenvector matrix (infinity when the
/// eigensolver fails).
double eigenvector_condition(const Matrix& s);

bool is_invertible(const Matrix& a, double tol = 1e-12);

}  // namespace eqnf
