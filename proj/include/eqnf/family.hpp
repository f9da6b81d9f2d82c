#pragma once

#include "eqnf/normalform.hpp"
#include "eqnf/polymap.hpp"

#include <functional>
#include <vector>

namespace eqnf {

/// Parameter-dependent local diffeomorphism x -> psi_lambda(x) with
/// psi_lambda(0) = 0. `jet` is optional; it returns the order-k Taylor
/// truncation about 0.
struct MapFamily {
  int n = 0;
  int m = 0;
  std::function<Vector(const Vector&, const Vector&)> eval;
  std::function<Matrix(const Vector&, const Vector&)> jacobian;
  std::function<TruncatedMapd(const Vector&, int)> jet;

  Vector operator()(const Vector& x, const Vector& lambda) const { return eval(x, lambda); }
  Matrix linear_part(const Vector& lambda) const { return jacobian(Vector::Zero(n), lambda); }
};

/// psi_lambda = f0 + sum_i lambda_i df[i], evaluated as polynomials.
MapFamily polynomial_family(const TruncatedMapd& f0, const std::vector<TruncatedMapd>& df = {});

/// Family known only at the listed parameter values; other values throw.
MapFamily sampled_family(const std::vector<Vector>& lambdas, const std::vector<TruncatedMapd>& maps);

/// h o psi o h^{-1}, with h^{-1} evaluated by Newton.
MapFamily conjugated_family(const MapFamily& psi, const TruncatedMapd& h);

/// Solves f(x) = y by Newton from x0. Throws InverseNewtonFailed.
Vector newton_inverse(const std::function<Vector(const Vector&)>& f, const std::function<Matrix(const Vector&)>& df,
                      const Vector& y, const Vector& x0, int max_iter = 60);

/// psi_lambda^{-1}(y), started from the inverse of the linear part.
Vector family_inverse(const MapFamily& psi, const Vector& y, const Vector& lambda);

/// psi_lambda^q(x).
Vector iterate(const MapFamily& psi, const Vector& x, const Vector& lambda, int q);

/// Order-k jets at the given parameter values.
MapSamples sample_jets(const MapFamily& psi, const std::vector<Vector>& lambdas, int k);

/// Taylor jet at (1, 1), shifted to the origin, of the reversible planar map
/// (x, y) -> (x^3 / y^2, x^2 / y).
TruncatedMapd planar_example_jet(int k);

/// The planar example truncated at order k as a family with one (inactive)
/// parameter.
MapFamily planar_example_family(int k);

}  // namespace eqnf
