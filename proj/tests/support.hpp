#pragma once

#include "eqnf/eqnf.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace eqnf::testing {

class Rng {
 public:
  explicit Rng(unsigned seed) : gen_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Matrix matrix(Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * uniform();
    return m;
  }
  Vector vector(Eigen::Index n, double scale = 1.0) { return matrix(n, 1, scale); }

  /// Well-conditioned invertible matrix: I + small perturbation.
  Matrix near_identity(Eigen::Index n, double eps = 0.3) {
    return Matrix::Identity(n, n) + matrix(n, n, eps / static_cast<double>(n));
  }

  Matrix orthogonal(Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
    return qr.householderQ();
  }

  TruncatedMapd poly(int n, int k, double scale = 1.0, int min_degree = 1) {
    TruncatedMapd f(n, k);
    for (int d = min_degree; d <= k; ++d) f.layer(d) = matrix(n, f.space().count(d), scale);
    return f;
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
};

inline Matrix rot(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

inline Matrix block_diag(const std::vector<Matrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix m = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    m.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return m;
}

inline Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

/// The reversing involution (x, y) -> (y, x).
inline Matrix swap2() { return mat2(0, 1, 1, 0); }

/// Group {I, R} with chi(R) = -1 for the swap in the plane.
inline GroupData swap_group() { return make_group({Matrix::Identity(2, 2), swap2()}, {1.0, -1.0}); }

/// Linearization at (1, 1) of the planar reversible example.
inline Matrix example_a0() { return mat2(3, -2, 2, -1); }

/// Taylor coefficients about 0 of (1 + x)^a (1 + y)^b - 1 up to degree k.
inline Vector binomial_product(double a, double b, int k, const MonomialSpace& s) {
  auto gbin = [](double p, int i) {
    double c = 1.0;
    for (int j = 0; j < i; ++j) c *= (p - j) / (j + 1);
    return c;
  };
  Vector row = Vector::Zero(s.size());
  for (int i = 0; i <= k; ++i)
    for (int j = 0; i + j <= k; ++j)
      if (i + j >= 1) row(s.index_of({i, j})) = gbin(a, i) * gbin(b, j);
  return row;
}

/// The example map shifted to the fixed point (1, 1), truncated at order k:
/// ((1+x)^3 (1+y)^-2 - 1, (1+x)^2 (1+y)^-1 - 1).
inline TruncatedMapd example_map(int k) {
  TruncatedMapd f(2, k);
  f.coeffs().row(0) = binomial_product(3.0, -2.0, k, f.space()).transpose();
  f.coeffs().row(1) = binomial_product(2.0, -1.0, k, f.space()).transpose();
  return f;
}

}  // namespace eqnf::testing
