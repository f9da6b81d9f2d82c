#pragma once

#include "eqnf/group.hpp"
#include "eqnf/hk_operators.hpp"
#include "eqnf/polymap.hpp"
#include "eqnf/subspace.hpp"

#include <vector>

namespace eqnf {

struct NormalFormOptions {
  double newton_tol = 1e-12;
  int max_iter = 50;
  double rank_tol = kSubspaceTol;
};

/// Ad(e^phi) A = A0 e^B with phi in gl^1_G ∩ Im(Ad(S0^{-1}) - I) and B in
/// ker(Ad(S0) - I) ∩ gl^{chi~}_{G^chi(A0)}.
struct LinearNFResult {
  Matrix phi;
  Matrix b;
  double residual = 0.0;  // |e^phi A e^-phi - A0 e^B|
  double projected_residual = 0.0;
  int iterations = 0;
};

LinearNFResult linear_nf(const Matrix& a, const Matrix& a0, const GroupData& gd, const AdaptedInnerProduct& ip,
                         const NormalFormOptions& opt = {});

/// T A T^{-1} = S0 e^{N0 + C} with T = e^{phi_nil} e^{phi_ss} and C in
/// ker(Ad(S0) - I) ∩ ker(ad(N0*)) ∩ gl^chi_G.
struct LinearNilpotentNFResult {
  Matrix phi_ss;
  Matrix phi_nil;
  Matrix transform;
  Matrix c;
  double residual = 0.0;  // |T A T^-1 - S0 e^{N0 + C}|
  double projected_residual = 0.0;
  int iterations = 0;
};

LinearNilpotentNFResult linear_nilpotent_nf(const Matrix& a, const Matrix& a0, const GroupData& gd,
                                            const AdaptedInnerProduct& ip, const NormalFormOptions& opt = {});

/// A map family sampled at parameter values. Entry 0 is expected at the
/// bifurcation point when the family is used for normal forms.
struct MapSamples {
  std::vector<Vector> lambdas;
  std::vector<TruncatedMapd> maps;
};

/// Structure of one degree of the normal-form computation.
struct DegreeInfo {
  int degree = 0;
  Matrix codomain;            // admissible values of the exponent layer
  Matrix admissible;          // basis of the normal-form layer space
  Matrix removable;           // complement removed by the transform
  Matrix domain;              // transform directions used by the solve
  Matrix free_directions;     // transform directions that act trivially at lambda = 0
  double homological_condition = 0.0;
  double formula_discrepancy = 0.0;  // |derived operator - transcribed operator| at the first sample
  // Dimensions of ker ∩ Im P^{chi~}_{G^chi(A0)} and ker ∩ Im P^chi_G.
  Eigen::Index dim_tilde_kernel = 0;
  Eigen::Index dim_chi_kernel = 0;
};

struct NormalFormSample {
  Vector lambda;
  Matrix linear_transform;
  TruncatedMapd transform;   // Phi
  TruncatedMapd exponent;    // X (nilpotent form: without N0)
  TruncatedMapd normalized;  // Phi psi Phi^{-1}
  double residual = 0.0;     // |Phi psi Phi^{-1} - base o exp(exponent)|
  double normal_form_defect = 0.0;
  double codomain_defect = 0.0;
};

struct NormalFormResult {
  bool nilpotent = true;
  int order = 0;
  Matrix a0;
  Matrix s0;
  Matrix n0;  // nilpotent logarithm, S0 e^{n0} = A0
  AdaptedInnerProduct ip = AdaptedInnerProduct::standard(1);
  std::vector<DegreeInfo> degrees;  // index 0 is degree 1
  std::vector<NormalFormSample> samples;
  double residual = 0.0;  // worst sample residual

  /// Base linear map of the form: A0 (semisimple form) or S0 (nilpotent form).
  const Matrix& base() const { return nilpotent ? s0 : a0; }
  /// Full exponent of a sample: X, or N0 + X in the nilpotent form.
  TruncatedMapd full_exponent(std::size_t i) const;
};

/// Ad(Phi) psi = A0 e^{X} modulo degree k + 1 with X in
/// ker(Ad(S0) - I) ∩ Im(P^{chi~}_{G^chi(A0)}).
NormalFormResult semisimple_nf(const MapSamples& psi, const Matrix& a0, const GroupData& gd,
                               const AdaptedInnerProduct& ip, int k, const NormalFormOptions& opt = {});

/// Ad(Phi) psi = S0 e^{N0 + X} modulo degree k + 1 with X commuting with
/// S0, in ker(ad(N0*)) and (N0 + X) o g = chi(g) g o (N0 + X).
NormalFormResult nilpotent_nf(const MapSamples& psi, const Matrix& a0, const GroupData& gd,
                              const AdaptedInnerProduct& ip, int k, const NormalFormOptions& opt = {});

/// Same, with the inner product built from S0 and the group.
NormalFormResult nilpotent_nf(const MapSamples& psi, const Matrix& a0, const GroupData& gd, int k,
                              const NormalFormOptions& opt = {});

/// Residuals of the four exponent identities of the nilpotent form, computed
/// from coefficients: jet, S0-commutation, ad(N0*)-kernel and equivariance.
struct ExponentChecks {
  double jet = 0.0;
  double commutes_s0 = 0.0;
  double adjoint_kernel = 0.0;
  double equivariance = 0.0;
  double transform_equivariance = 0.0;
};

ExponentChecks check_exponent(const NormalFormResult& r, const GroupData& gd, std::size_t sample);

}  // namespace eqnf
