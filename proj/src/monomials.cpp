#include "eqnf/monomials.hpp"

#include "eqnf/types.hpp"

#include <mutex>

namespace eqnf {

namespace {

// Exponents of degree d in n variables, lexicographically descending.
void enumerate(int n, int d, int v, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (v == n - 1) {
    cur[v] = d;
    out.push_back(cur);
    return;
  }
  for (int a = d; a >= 0; --a) {
    cur[v] = a;
    enumerate(n, d - a, v + 1, cur, out);
  }
}

}  // namespace

int monomial_count(int n, int d) {
  // C(n + d - 1, d)
  long long c = 1;
  for (int i = 1; i <= d; ++i) c = c * (n - 1 + i) / i;
  return static_cast<int>(c);
}

MonomialSpace::MonomialSpace(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 0) throw Error(ErrorCode::DimensionMismatch, "monomial space needs n >= 1 and k >= 0");
  offset_.push_back(0);
  for (int d = 0; d <= k; ++d) {
    MultiIndex cur(n, 0);
    enumerate(n, d, 0, cur, exps_);
    offset_.push_back(static_cast<int>(exps_.size()));
  }
  const int m = size();
  degree_.resize(m);
  factorial_.resize(m);
  for (int i = 0; i < m; ++i) {
    lookup_[exps_[i]] = i;
    int deg = 0;
    double f = 1.0;
    for (int a : exps_[i]) {
      deg += a;
      for (int j = 2; j <= a; ++j) f *= j;
    }
    degree_[i] = deg;
    factorial_[i] = f;
  }
  raised_.assign(m, std::vector<int>(n, -1));
  lowered_.assign(m, std::vector<int>(n, -1));
  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < n; ++v) {
      MultiIndex up = exps_[i];
      up[v] += 1;
      raised_[i][v] = index_of(up);
      if (exps_[i][v] > 0) {
        MultiIndex down = exps_[i];
        down[v] -= 1;
        lowered_[i][v] = index_of(down);
      }
    }
  }
  product_.assign(m, std::vector<int>(m, -1));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (degree_[i] + degree_[j] > k) continue;
      MultiIndex s = exps_[i];
      for (int v = 0; v < n; ++v) s[v] += exps_[j][v];
      product_[i][j] = index_of(s);
    }
  }
}

int MonomialSpace::index_of(const MultiIndex& alpha) const {
  const auto it = lookup_.find(alpha);
  return it == lookup_.end() ? -1 : it->second;
}

std::shared_ptr<const MonomialSpace> monomial_space(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_shared<const MonomialSpace>(n, k);
  return slot;
}

}  // namespace eqnf
