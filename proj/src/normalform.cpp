#include "eqnf/normalform.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace eqnf {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Eigen::Index n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

Matrix identity_like(const Matrix& m) { return Matrix::Identity(m.rows(), m.cols()); }

Matrix hstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

double condition_number(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (m.rows() != m.cols() || smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

// Frozen-derivative Newton on the projected residual. `residual` returns the
// full residual as a vector; `step` maps a projected residual to a domain
// correction.
template <typename Residual, typename Update>
int frozen_newton(const SplitSubspaces& split, const Matrix& jac_pinv, const Matrix& domain, Residual&& residual,
                  Update&& update, const NormalFormOptions& opt, double& final_norm, const char* what) {
  int it = 0;
  for (;; ++it) {
    const Vector f = residual();
    const Vector r = split.coords_a(f);
    final_norm = r.norm();
    if (final_norm <= opt.newton_tol * std::max(1.0, f.norm())) break;
    if (it >= opt.max_iter) {
      if (final_norm <= 1e3 * opt.newton_tol * std::max(1.0, f.norm())) break;
      throw Error(ErrorCode::NoConvergence, std::string(what) + ": Newton did not converge", final_norm);
    }
    update(Vector(domain * (jac_pinv * r)));
  }
  return it;
}

struct LinearSetup {
  Matrix s0;
  Matrix n0;
};

LinearSetup split_a0(const Matrix& a0) {
  const SUDecomposition su = su_decomposition(a0);
  return {su.semisimple, su.nil_log};
}

}  // namespace

LinearNFResult linear_nf(const Matrix& a, const Matrix& a0, const GroupData& gd, const AdaptedInnerProduct& ip,
                         const NormalFormOptions& opt) {
  require_square(a, "linear_nf");
  require_same_dim(a.rows(), a0.rows(), "linear_nf");
  require_same_dim(a.rows(), ip.dim(), "linear_nf");
  if (!is_chi_equivariant_linear(a, gd)) throw Error(ErrorCode::NotEquivariant, "A is not chi-equivariant");
  const Eigen::Index n = a.rows();
  const LinearSetup ls = split_a0(a0);
  const ExtendedGroupData ext = extended_group(gd, a0);
  const Character tchi = tilde_character(gd, ext, gd.chi);

  const Matrix ad_s0inv = adk_operator(ls.s0.inverse(), 1).matrix - Matrix::Identity(n * n, n * n);
  const Matrix p1 = orthonormalize(projection_operator(gd, trivial_character(gd)), opt.rank_tol);
  const Matrix domain = intersect_image(p1, ad_s0inv, opt.rank_tol);
  const Matrix codomain = orthonormalize(projection_operator(ext.group, tchi), opt.rank_tol);
  const SplitSubspaces split = build_splitting(codomain, ad_s0inv, opt.rank_tol);

  const Matrix a0inv = a0.inverse();
  const Matrix d = adk_operator(a0inv, 1).matrix - Matrix::Identity(n * n, n * n);
  Matrix jc(split.part_a.cols(), domain.cols());
  for (Eigen::Index c = 0; c < domain.cols(); ++c) jc.col(c) = split.coords_a(d * domain.col(c));
  const Matrix jp = pinv(jc);

  LinearNFResult res;
  Matrix phi = Matrix::Zero(n, n);
  auto f_of = [&]() {
    const Matrix e = matrix_exp(phi);
    return matrix_log(a0inv * e * a * matrix_exp(-phi));
  };
  res.iterations = frozen_newton(
      split, jp, domain, [&]() { return vec(f_of()); }, [&](const Vector& step) { phi -= unvec(step, n); }, opt,
      res.projected_residual, "linear_nf");
  res.phi = phi;
  res.b = f_of();
  res.residual = max_abs(matrix_exp(phi) * a * matrix_exp(-phi) - a0 * matrix_exp(res.b));
  return res;
}

LinearNilpotentNFResult linear_nilpotent_nf(const Matrix& a, const Matrix& a0, const GroupData& gd,
                                            const AdaptedInnerProduct& ip, const NormalFormOptions& opt) {
  const LinearNFResult lin = linear_nf(a, a0, gd, ip, opt);
  const Eigen::Index n = a.rows();
  const LinearSetup ls = split_a0(a0);
  const Matrix nstar = adjoint_wrt(ip, ls.n0);

  const Matrix e_ss = matrix_exp(lin.phi);
  const Matrix a1 = e_ss * a * matrix_exp(-lin.phi);
  const Matrix m = matrix_log(ls.s0.inverse() * a1);

  const Matrix id = Matrix::Identity(n * n, n * n);
  const Matrix ad_s0 = adk_operator(ls.s0, 1).matrix - id;
  const Matrix ad_n0 = ad_operator(ls.n0, 1).matrix;
  const Matrix ad_nstar = ad_operator(nstar, 1).matrix;

  const Matrix pchi = orthonormalize(projection_operator(gd, gd.chi), opt.rank_tol);
  const Matrix kb = intersect_kernel(pchi, ad_s0, opt.rank_tol);
  const SplitSubspaces split =
      make_split(kb, intersect_image(kb, ad_n0, opt.rank_tol), intersect_kernel(kb, ad_nstar, opt.rank_tol),
                 opt.rank_tol);
  const Matrix p1 = orthonormalize(projection_operator(gd, trivial_character(gd)), opt.rank_tol);
  const Matrix domain = intersect_image(intersect_kernel(p1, ad_s0, opt.rank_tol), ad_nstar, opt.rank_tol);

  Matrix jc(split.part_a.cols(), domain.cols());
  for (Eigen::Index c = 0; c < domain.cols(); ++c) jc.col(c) = split.coords_a(-ad_n0 * domain.col(c));
  const Matrix jp = pinv(jc);

  LinearNilpotentNFResult res;
  res.phi_ss = lin.phi;
  Matrix phi = Matrix::Zero(n, n);
  auto f_of = [&]() { return Matrix(matrix_exp(phi) * m * matrix_exp(-phi) - ls.n0); };
  res.iterations = frozen_newton(
      split, jp, domain, [&]() { return vec(f_of()); }, [&](const Vector& step) { phi -= unvec(step, n); }, opt,
      res.projected_residual, "linear_nilpotent_nf");
  res.phi_nil = phi;
  res.c = f_of();
  res.transform = matrix_exp(phi) * e_ss;
  res.residual = max_abs(res.transform * a * res.transform.inverse() - ls.s0 * matrix_exp(ls.n0 + res.c));
  return res;
}

TruncatedMapd NormalFormResult::full_exponent(std::size_t i) const {
  TruncatedMapd x = samples.at(i).exponent;
  if (nilpotent) x += TruncatedMapd::linear(n0, x.order());
  return x;
}

namespace {

struct DegreeSetup {
  DegreeInfo info;
  SplitSubspaces split;
  Matrix codomain_projector;
};

DegreeSetup setup_degree(int j, bool nilpotent, const Matrix& s0, const Matrix& n0, const Matrix& nstar,
                         const GroupData& gd, const ExtendedGroupData& ext, const Character& tchi,
                         const NormalFormOptions& opt) {
  const double tol = opt.rank_tol;
  const Matrix ad_s0 = adk_operator(s0, j).matrix - Matrix::Identity(hk_dimension(gd.dim(), j), hk_dimension(gd.dim(), j));
  const Matrix cod = orthonormalize(hk_projection(ext.group, tchi, j).matrix, tol);
  const Matrix p1 = orthonormalize(hk_projection(gd, trivial_character(gd), j).matrix, tol);
  const Matrix im1 = intersect_image(cod, ad_s0, tol);
  const Matrix ker1 = intersect_kernel(cod, ad_s0, tol);
  const Matrix p1_im = intersect_image(p1, ad_s0, tol);
  const Matrix p1_ker = intersect_kernel(p1, ad_s0, tol);

  DegreeSetup ds;
  ds.info.degree = j;
  ds.info.codomain = cod;
  ds.info.dim_tilde_kernel = ker1.cols();
  ds.info.dim_chi_kernel =
      intersect_kernel(orthonormalize(hk_projection(gd, gd.chi, j).matrix, tol), ad_s0, tol).cols();
  if (nilpotent) {
    const Matrix ad_n0 = ad_operator(n0, j).matrix;
    const Matrix ad_nstar = ad_operator(nstar, j).matrix;
    const Matrix removable = hstack(im1, intersect_image(ker1, ad_n0, tol));
    const Matrix admissible = intersect_kernel(ker1, ad_nstar, tol);
    ds.split = make_split(cod, removable, admissible, tol);
    ds.info.domain = hstack(p1_im, intersect_image(p1_ker, ad_nstar, tol));
    ds.info.free_directions = intersect_kernel(p1_ker, ad_n0, tol);
  } else {
    ds.split = make_split(cod, im1, ker1, tol);
    ds.info.domain = p1_im;
    ds.info.free_directions = p1_ker;
  }
  ds.info.removable = ds.split.part_a;
  ds.info.admissible = ds.split.part_b;
  ds.codomain_projector = cod * cod.transpose();
  return ds;
}

// Change of the degree-j exponent layer caused by conjugating with e^phi,
// phi homogeneous of degree j: C_j(W1)^{-1} (Ad_j(F1^{-1}) - I).
Matrix exponent_response(const Matrix& f1, const Matrix& w1, int j) {
  const Matrix ad = adk_operator(f1.inverse(), j).matrix;
  return solve_ck(ck_operator(w1, j), Matrix(ad - identity_like(ad)));
}

// The same operator as transcribed in the printed degree-k step:
// C_k(-X1) Ad(A^{-1}) - C_k(X1)^{-1}.
Matrix transcribed_response(const Matrix& base, const Matrix& w1, int j) {
  const Matrix ckm = ck_operator(-w1, j).matrix;
  const Matrix ckp_inv = solve_ck(ck_operator(w1, j), Matrix(Matrix::Identity(ckm.rows(), ckm.cols())));
  return ckm * adk_operator(base.inverse(), j).matrix - ckp_inv;
}

NormalFormResult run_pipeline(bool nilpotent, const MapSamples& psi, const Matrix& a0, const GroupData& gd,
                              const AdaptedInnerProduct& ip, int k, const NormalFormOptions& opt) {
  if (psi.maps.empty()) throw Error(ErrorCode::DimensionMismatch, "no map samples");
  if (psi.lambdas.size() != psi.maps.size()) throw Error(ErrorCode::DimensionMismatch, "lambda/map count mismatch");
  require_square(a0, "A0");
  const int n = static_cast<int>(a0.rows());
  require_same_dim(n, gd.dim(), "group dimension");
  if (k < 1) throw Error(ErrorCode::DimensionMismatch, "order must be at least 1");

  NormalFormResult res;
  res.nilpotent = nilpotent;
  res.order = k;
  res.a0 = a0;
  const SUDecomposition su = su_decomposition(a0);
  res.s0 = su.semisimple;
  res.n0 = su.nil_log;
  res.ip = ip;
  const Matrix nstar = adjoint_wrt(ip, res.n0);
  const Matrix& base = nilpotent ? res.s0 : res.a0;
  const Matrix base_inv = base.inverse();
  const ExtendedGroupData ext = extended_group(gd, base);
  const Character tchi = tilde_character(gd, ext, gd.chi);

  // Degree 1 bookkeeping only; the linear step is solved on gl(n).
  res.degrees.push_back(DegreeInfo{});
  res.degrees[0].degree = 1;
  std::vector<DegreeSetup> setups;
  for (int j = 2; j <= k; ++j) {
    setups.push_back(setup_degree(j, nilpotent, res.s0, res.n0, nstar, gd, ext, tchi, opt));
    res.degrees.push_back(setups.back().info);
  }

  for (std::size_t si = 0; si < psi.maps.size(); ++si) {
    const TruncatedMapd map = psi.maps[si].truncated(k);
    require_same_dim(map.dim(), n, "map dimension");
    NormalFormSample smp;
    smp.lambda = psi.lambdas[si];

    Matrix t1;
    if (nilpotent) {
      t1 = linear_nilpotent_nf(map.linear_part(), a0, gd, ip, opt).transform;
    } else {
      t1 = matrix_exp(linear_nf(map.linear_part(), a0, gd, ip, opt).phi);
    }
    smp.linear_transform = t1;
    TruncatedMapd phi_total = TruncatedMapd::linear(t1, k);
    TruncatedMapd cur = ad_conjugate(phi_total, map, k);

    for (int j = 2; j <= k; ++j) {
      DegreeSetup& ds = setups[j - 2];
      DegreeInfo& info = res.degrees[j - 1];
      double defect = 0.0;
      for (int it = 0;; ++it) {
        const TruncatedMapd w = log_map(base_inv * cur.truncated(j), j);
        const Vector z = w.layer_vector(j);
        smp.codomain_defect = std::max(smp.codomain_defect, (z - ds.codomain_projector * z).norm());
        const Vector r = ds.split.coords_a(z);
        defect = r.norm();
        const bool done = defect <= opt.newton_tol * std::max(1.0, z.norm());
        if (done && !(si == 0 && it == 0)) break;
        if (it >= 4) {
          throw Error(ErrorCode::NoConvergence, "degree " + std::to_string(j) + " did not settle", defect);
        }
        const Matrix w1 = w.linear_part();
        const Matrix resp = exponent_response(cur.linear_part(), w1, j);
        Matrix jc(ds.split.part_a.cols(), info.domain.cols());
        for (Eigen::Index c = 0; c < info.domain.cols(); ++c) jc.col(c) = ds.split.coords_a(resp * info.domain.col(c));
        if (it == 0) {
          const double disc = max_abs(resp - transcribed_response(base, w1, j));
          info.formula_discrepancy = std::max(info.formula_discrepancy, disc);
          if (si == 0) info.homological_condition = condition_number(jc);
        }
        if (done) break;
        const Vector step = -(info.domain * (pinv(jc) * r));
        TruncatedMapd phi = TruncatedMapd::zero(n, k);
        phi.set_layer_vector(j, step);
        const TruncatedMapd e = exp_vf(phi, k);
        cur = ad_conjugate(e, cur, k);
        phi_total = compose(e, phi_total, k);
      }
      smp.normal_form_defect = std::max(smp.normal_form_defect, defect);
    }

    const TruncatedMapd w = log_map(base_inv * cur, k);
    smp.exponent = nilpotent ? w - TruncatedMapd::linear(res.n0, k) : w;
    smp.transform = phi_total;
    smp.normalized = ad_conjugate(phi_total, map, k);
    smp.residual = max_coeff(smp.normalized - base * exp_vf(w, k));
    res.residual = std::max(res.residual, smp.residual);
    res.samples.push_back(std::move(smp));
  }
  return res;
}

}  // namespace

NormalFormResult semisimple_nf(const MapSamples& psi, const Matrix& a0, const GroupData& gd,
                               const AdaptedInnerProduct& ip, int k, const NormalFormOptions& opt) {
  return run_pipeline(false, psi, a0, gd, ip, k, opt);
}

NormalFormResult nilpotent_nf(const MapSamples& psi, const Matrix& a0, const GroupData& gd,
                              const AdaptedInnerProduct& ip, int k, const NormalFormOptions& opt) {
  return run_pipeline(true, psi, a0, gd, ip, k, opt);
}

NormalFormResult nilpotent_nf(const MapSamples& psi, const Matrix& a0, const GroupData& gd, int k,
                              const NormalFormOptions& opt) {
  const SUDecomposition su = su_decomposition(a0);
  return nilpotent_nf(psi, a0, gd, invariant_inner_product(su.semisimple, gd), k, opt);
}

ExponentChecks check_exponent(const NormalFormResult& r, const GroupData& gd, std::size_t sample) {
  const NormalFormSample& s = r.samples.at(sample);
  const int k = r.order;
  const TruncatedMapd& x = s.exponent;
  ExponentChecks out;
  out.jet = std::abs(x.coeffs().col(0).cwiseAbs().maxCoeff());
  if (s.lambda.size() == 0 || s.lambda.norm() == 0.0) out.jet = std::max(out.jet, max_abs(x.linear_part()));

  const TruncatedMapd s0 = TruncatedMapd::linear(r.s0, k);
  out.commutes_s0 = max_coeff(compose(s0, x, k) - compose(x, s0, k));

  const Matrix nstar = adjoint_wrt(r.ip, r.n0);
  out.adjoint_kernel = max_coeff(lie_derivative(x, TruncatedMapd::linear(nstar, k)) - nstar * x);

  const TruncatedMapd full = r.nilpotent ? x + TruncatedMapd::linear(r.n0, k) : x;
  for (std::size_t i = 0; i < gd.order(); ++i) {
    const TruncatedMapd g = TruncatedMapd::linear(gd.elements[i], k);
    out.equivariance = std::max(out.equivariance, max_coeff(compose(full, g, k) - gd.chi[i] * compose(g, full, k)));
    const TruncatedMapd ginv = TruncatedMapd::linear(gd.elements[gd.inverse[i]], k);
    out.transform_equivariance = std::max(
        out.transform_equivariance, max_coeff(compose(compose(g, s.transform, k), ginv, k) - s.transform));
  }
  return out;
}

}  // namespace eqnf
