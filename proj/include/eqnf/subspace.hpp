#pragma once

#include "eqnf/linalg.hpp"

namespace eqnf {

/// Relative rank tolerance for subspace computations.
inline constexpr double kSubspaceTol = 1e-9;

/// Orthonormal basis of span(B).
Matrix orthonormalize(const Matrix& b, double tol = kSubspaceTol);

/// Orthonormal basis of span(B) intersected with span(C).
Matrix intersect(const Matrix& b, const Matrix& c, double tol = kSubspaceTol);

/// span(B) intersected with Im(M); singular values of M below tol * max(|M|, 1) count as zero.
Matrix intersect_image(const Matrix& b, const Matrix& m, double tol = kSubspaceTol);

/// span(B) intersected with ker(M).
Matrix intersect_kernel(const Matrix& b, const Matrix& m, double tol = kSubspaceTol);

/// Direct sum span(part_a) + span(part_b) = span(ambient) with the oblique
/// projectors onto each part along the other.
struct SplitSubspaces {
  Matrix ambient;
  Matrix part_a;
  Matrix part_b;
  Matrix projector_a;
  Matrix projector_b;

  /// Coordinates of projector_a * v in the part_a basis.
  Vector coords_a(const Vector& v) const;
  Vector coords_b(const Vector& v) const;
  /// The linear maps behind coords_a and coords_b.
  Matrix coefficients_a() const { return coeff_map_.topRows(part_a.cols()); }
  Matrix coefficients_b() const { return coeff_map_.bottomRows(part_b.cols()); }

 private:
  friend SplitSubspaces make_split(const Matrix&, const Matrix&, const Matrix&, double);
  Matrix coeff_map_;  // pinv([part_a part_b])
};

/// Checks that the parts are independent and fill the ambient space; throws
/// SplitFailure otherwise.
SplitSubspaces make_split(const Matrix& ambient, const Matrix& part_a, const Matrix& part_b,
                          double tol = kSubspaceTol);

/// ambient = (ambient ∩ Im op) ⊕ (ambient ∩ ker op).
SplitSubspaces build_splitting(const Matrix& ambient, const Matrix& op, double tol = kSubspaceTol);

/// Moore-Penrose pseudo-inverse with a relative singular value cut-off.
Matrix pinv(const Matrix& m, double rel_tol = 1e-12);

}  // namespace eqnf
