#include "eqnf/subspace.hpp"

#include <Eigen/SVD>

namespace eqnf {

namespace {

// Cut-off for singular values of [Qb, -Qc] with orthonormal blocks; roughly
// the sine of the largest principal angle still counted as shared.
constexpr double kAngleTol = 1e-8;

double sigma_max(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// Operators here (Ad - I, ad N) are compared against unit scale, so an
// operator that is zero up to rounding has everything in its kernel.
double operator_scale(const Matrix& m) { return std::max(sigma_max(m), 1.0); }

}  // namespace

Matrix pinv(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cut = rel_tol * s(0);
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix orthonormalize(const Matrix& b, double tol) {
  if (b.cols() == 0) return Matrix(b.rows(), 0);
  // Spanning sets are unit scale, so a set that is zero up to rounding spans
  // nothing.
  return image_basis(b, tol * operator_scale(b));
}

Matrix intersect(const Matrix& b, const Matrix& c, double tol) {
  const Matrix qb = orthonormalize(b, tol);
  const Matrix qc = orthonormalize(c, tol);
  if (qb.cols() == 0 || qc.cols() == 0) return Matrix(b.rows(), 0);
  Matrix stacked(qb.rows(), qb.cols() + qc.cols());
  stacked << qb, -qc;
  const Matrix null = kernel_basis(stacked, kAngleTol);
  if (null.cols() == 0) return Matrix(b.rows(), 0);
  // Average both representations of each shared vector.
  const Matrix v = 0.5 * (qb * null.topRows(qb.cols()) + qc * null.bottomRows(qc.cols()));
  return orthonormalize(v, 1e-6);
}

Matrix intersect_image(const Matrix& b, const Matrix& m, double tol) {
  return intersect(b, image_basis(m, tol * operator_scale(m)), tol);
}

Matrix intersect_kernel(const Matrix& b, const Matrix& m, double tol) {
  const Matrix qb = orthonormalize(b, tol);
  if (qb.cols() == 0) return qb;
  const Matrix k = kernel_basis(m * qb, tol * operator_scale(m));
  return qb * k;
}

Vector SplitSubspaces::coords_a(const Vector& v) const { return coeff_map_.topRows(part_a.cols()) * v; }

Vector SplitSubspaces::coords_b(const Vector& v) const { return coeff_map_.bottomRows(part_b.cols()) * v; }

SplitSubspaces make_split(const Matrix& ambient, const Matrix& part_a, const Matrix& part_b, double tol) {
  SplitSubspaces s;
  s.ambient = orthonormalize(ambient, tol);
  s.part_a = part_a;
  s.part_b = part_b;
  const Eigen::Index na = part_a.cols(), nb = part_b.cols();
  const Eigen::Index dim = ambient.rows();
  if (na + nb != s.ambient.cols()) {
    throw Error(ErrorCode::SplitFailure,
                "parts have dimensions " + std::to_string(na) + " + " + std::to_string(nb) + " in a space of dimension " +
                    std::to_string(s.ambient.cols()),
                static_cast<double>(na + nb - s.ambient.cols()));
  }
  Matrix both(dim, na + nb);
  both << part_a, part_b;
  if (na + nb > 0) {
    Eigen::JacobiSVD<Matrix> svd(both);
    const double smin = svd.singularValues()(na + nb - 1);
    if (smin <= kAngleTol * svd.singularValues()(0)) {
      throw Error(ErrorCode::SplitFailure, "parts are not independent", smin);
    }
    const Matrix outside = both - s.ambient * (s.ambient.transpose() * both);
    if (max_abs(outside) > 1e-7 * std::max(1.0, max_abs(both))) {
      throw Error(ErrorCode::SplitFailure, "parts leave the ambient space", max_abs(outside));
    }
  }
  s.coeff_map_ = pinv(both);
  s.projector_a = part_a * s.coeff_map_.topRows(na);
  s.projector_b = part_b * s.coeff_map_.bottomRows(nb);
  return s;
}

SplitSubspaces build_splitting(const Matrix& ambient, const Matrix& op, double tol) {
  return make_split(ambient, intersect_image(ambient, op, tol), intersect_kernel(ambient, op, tol), tol);
}

}  // namespace eqnf
