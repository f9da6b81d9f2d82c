#pragma once

#include <map>
#include <memory>
#include <vector>

namespace eqnf {

using MultiIndex = std::vector<int>;

/// All monomials x^alpha in n variables with |alpha| <= k, graded by degree
/// and lexicographically descending inside a degree (x^2, xy, y^2, ...).
/// Index 0 is the constant monomial.
class MonomialSpace {
 public:
  MonomialSpace(int n, int k);

  int nvars() const { return n_; }
  int max_degree() const { return k_; }
  int size() const { return static_cast<int>(exps_.size()); }

  /// First index and number of monomials of degree d.
  int offset(int d) const { return offset_[d]; }
  int count(int d) const { return offset_[d + 1] - offset_[d]; }

  const MultiIndex& exponent(int i) const { return exps_[i]; }
  int degree(int i) const { return degree_[i]; }
  /// Index of alpha, or -1 when absent.
  int index_of(const MultiIndex& alpha) const;

  /// Index of alpha + beta, or -1 when the degree exceeds k.
  int product(int i, int j) const { return product_[i][j]; }
  /// Index of alpha + e_v (-1 beyond degree k) and alpha - e_v (-1 if alpha_v = 0).
  int raised(int i, int v) const { return raised_[i][v]; }
  int lowered(int i, int v) const { return lowered_[i][v]; }

  /// alpha! = prod alpha_v!.
  double factorial(int i) const { return factorial_[i]; }

 private:
  int n_;
  int k_;
  std::vector<MultiIndex> exps_;
  std::vector<int> degree_;
  std::vector<int> offset_;
  std::map<MultiIndex, int> lookup_;
  std::vector<std::vector<int>> product_;
  std::vector<std::vector<int>> raised_;
  std::vector<std::vector<int>> lowered_;
  std::vector<double> factorial_;
};

/// Shared, immutable instance; construction is cached per (n, k).
std::shared_ptr<const MonomialSpace> monomial_space(int n, int k);

/// Number of monomials of degree exactly d in n variables.
int monomial_count(int n, int d);

}  // namespace eqnf
