#include "eqnf/family.hpp"

#include <cmath>
#include <limits>

namespace eqnf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_lambda(const Vector& lambda, int m) {
  if (lambda.size() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "parameter has " + std::to_string(lambda.size()) + " entries, expected " + std::to_string(m));
  }
}

}  // namespace

MapFamily polynomial_family(const TruncatedMapd& f0, const std::vector<TruncatedMapd>& df) {
  for (const auto& d : df) f0.check_compatible(d);
  MapFamily fam;
  fam.n = f0.dim();
  fam.m = std::max<int>(1, static_cast<int>(df.size()));
  const int m = static_cast<int>(df.size());
  auto at = [f0, df, m](const Vector& lambda) {
    TruncatedMapd f = f0;
    for (int i = 0; i < m; ++i) f += lambda(i) * df[i];
    return f;
  };
  fam.eval = [at, m = fam.m](const Vector& x, const Vector& lambda) {
    check_lambda(lambda, m);
    return Vector(at(lambda)(x));
  };
  fam.jacobian = [at, m = fam.m](const Vector& x, const Vector& lambda) {
    check_lambda(lambda, m);
    return Matrix(at(lambda).jacobian(x));
  };
  fam.jet = [at, m = fam.m](const Vector& lambda, int k) {
    check_lambda(lambda, m);
    const TruncatedMapd f = at(lambda);
    if (k <= f.order()) return f.truncated(k);
    TruncatedMapd g(f.dim(), k);
    g.coeffs().leftCols(f.coeffs().cols()) = f.coeffs();
    return g;
  };
  return fam;
}

MapFamily sampled_family(const std::vector<Vector>& lambdas, const std::vector<TruncatedMapd>& maps) {
  if (lambdas.empty() || lambdas.size() != maps.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sampled family needs one map per parameter value");
  }
  const int m = static_cast<int>(lambdas[0].size());
  for (std::size_t i = 1; i < maps.size(); ++i) {
    maps[0].check_compatible(maps[i]);
    check_lambda(lambdas[i], m);
  }
  auto pick = [lambdas, maps](const Vector& lambda) -> const TruncatedMapd& {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (lambdas[i].size() == lambda.size() && (lambdas[i] - lambda).cwiseAbs().maxCoeff() <= 1e-14) return maps[i];
    }
    throw Error(ErrorCode::DimensionMismatch, "parameter value is not one of the samples");
  };
  MapFamily fam;
  fam.n = maps[0].dim();
  fam.m = m;
  fam.eval = [pick](const Vector& x, const Vector& lambda) { return Vector(pick(lambda)(x)); };
  fam.jacobian = [pick](const Vector& x, const Vector& lambda) { return Matrix(pick(lambda).jacobian(x)); };
  fam.jet = [pick](const Vector& lambda, int k) {
    const TruncatedMapd& f = pick(lambda);
    if (k <= f.order()) return f.truncated(k);
    TruncatedMapd g(f.dim(), k);
    g.coeffs().leftCols(f.coeffs().cols()) = f.coeffs();
    return g;
  };
  return fam;
}

Vector newton_inverse(const std::function<Vector(const Vector&)>& f, const std::function<Matrix(const Vector&)>& df,
                      const Vector& y, const Vector& x0, int max_iter) {
  Vector x = x0;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Vector r = f(x) - y;
    const double rn = r.norm();
    const double scale = std::max(y.norm(), x.norm());
    if (rn <= 8 * kEps * scale || rn == 0.0) return x;
    // Stop once the residual stops improving at rounding level.
    if (rn >= best && rn <= 1e-12 * std::max(scale, 1e-300)) return x;
    best = std::min(best, rn);
    x -= df(x).partialPivLu().solve(r);
  }
  const Vector r = f(x) - y;
  if (r.norm() <= 1e-11 * std::max(y.norm(), x.norm())) return x;
  throw Error(ErrorCode::InverseNewtonFailed, "Newton inversion did not converge", r.norm());
}

MapFamily conjugated_family(const MapFamily& psi, const TruncatedMapd& h) {
  require_same_dim(psi.n, h.dim(), "conjugated_family");
  const Matrix h1 = h.linear_part();
  if (!is_invertible(h1)) throw Error(ErrorCode::NonInvertibleLinearPart, "conjugating map has singular linear part");
  const Matrix h1inv = h1.inverse();
  auto hinv = [h, h1inv](const Vector& y) {
    return newton_inverse([&h](const Vector& x) { return Vector(h(x)); },
                          [&h](const Vector& x) { return Matrix(h.jacobian(x)); }, y, h1inv * y);
  };
  MapFamily fam;
  fam.n = psi.n;
  fam.m = psi.m;
  fam.eval = [psi, h, hinv](const Vector& x, const Vector& lambda) { return Vector(h(psi(hinv(x), lambda))); };
  fam.jacobian = [psi, h, hinv](const Vector& x, const Vector& lambda) {
    const Vector z = hinv(x);
    const Vector w = psi(z, lambda);
    return Matrix(h.jacobian(w) * psi.jacobian(z, lambda) * h.jacobian(z).inverse());
  };
  if (psi.jet) {
    fam.jet = [psi, h](const Vector& lambda, int k) {
      const TruncatedMapd hk = h.order() >= k ? h.truncated(k) : compose(h, TruncatedMapd::identity(h.dim(), k), k);
      return compose(compose(hk, psi.jet(lambda, k), k), inverse_truncated(hk, k), k);
    };
  }
  return fam;
}

Vector family_inverse(const MapFamily& psi, const Vector& y, const Vector& lambda) {
  const Matrix a = psi.linear_part(lambda);
  return newton_inverse([&](const Vector& x) { return psi(x, lambda); },
                        [&](const Vector& x) { return psi.jacobian(x, lambda); }, y, a.partialPivLu().solve(y));
}

Vector iterate(const MapFamily& psi, const Vector& x, const Vector& lambda, int q) {
  Vector y = x;
  for (int i = 0; i < q; ++i) y = psi(y, lambda);
  return y;
}

MapSamples sample_jets(const MapFamily& psi, const std::vector<Vector>& lambdas, int k) {
  if (!psi.jet) throw Error(ErrorCode::DimensionMismatch, "family has no Taylor jets");
  MapSamples s;
  for (const auto& l : lambdas) {
    s.lambdas.push_back(l);
    s.maps.push_back(psi.jet(l, k));
  }
  return s;
}

TruncatedMapd planar_example_jet(int k) {
  // (1+x)^a (1+y)^b - 1 = sum over i + j >= 1 of C(a, i) C(b, j) x^i y^j.
  auto gbin = [](double p, int i) {
    double c = 1.0;
    for (int j = 0; j < i; ++j) c *= (p - j) / (j + 1);
    return c;
  };
  TruncatedMapd f(2, k);
  const double pw[2][2] = {{3.0, -2.0}, {2.0, -1.0}};
  for (int comp = 0; comp < 2; ++comp)
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j)
        if (i + j >= 1) f.coeff(comp, {i, j}) = gbin(pw[comp][0], i) * gbin(pw[comp][1], j);
  return f;
}

MapFamily planar_example_family(int k) { return polynomial_family(planar_example_jet(k)); }

}  // namespace eqnf
