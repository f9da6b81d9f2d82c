#include "eqnf/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

namespace eqnf {

namespace {

double op_scale(const Matrix& a) { return std::max(1.0, a.norm()); }

// Single-linkage clustering of complex numbers. Returns cluster id per entry.
std::vector<int> cluster_values(const ComplexVector& ev, double tol) {
  const Eigen::Index n = ev.size();
  std::vector<int> id(n, -1);
  int next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (id[i] >= 0) continue;
    id[i] = next;
    std::vector<Eigen::Index> stack{i};
    while (!stack.empty()) {
      const Eigen::Index j = stack.back();
      stack.pop_back();
      for (Eigen::Index l = 0; l < n; ++l) {
        if (id[l] < 0 && std::abs(ev(l) - ev(j)) <= tol) {
          id[l] = next;
          stack.push_back(l);
        }
      }
    }
    ++next;
  }
  return id;
}

struct Cluster {
  std::complex<double> mean;
  int multiplicity = 0;
};

std::vector<Cluster> clusters_of(const ComplexVector& ev, double tol) {
  const auto id = cluster_values(ev, tol);
  int count = 0;
  for (int v : id) count = std::max(count, v + 1);
  std::vector<Cluster> out(count);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    out[id[i]].mean += ev(i);
    out[id[i]].multiplicity += 1;
  }
  for (auto& c : out) c.mean /= static_cast<double>(c.multiplicity);
  return out;
}

// Real squarefree polynomial whose roots are the cluster means. Coefficients
// are stored lowest degree first.
std::vector<double> squarefree_polynomial(const std::vector<Cluster>& cl, double tol) {
  std::vector<double> p{1.0};
  auto multiply = [&p](const std::vector<double>& f) {
    std::vector<double> r(p.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) r[i + j] += p[i] * f[j];
    p = r;
  };
  for (const auto& c : cl) {
    if (std::abs(c.mean.imag()) <= tol) {
      multiply({-c.mean.real(), 1.0});
    } else if (c.mean.imag() > 0) {
      multiply({std::norm(c.mean), -2.0 * c.mean.real(), 1.0});
    }
  }
  return p;
}

Matrix eval_poly(const std::vector<double>& p, const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix r = Matrix::Zero(n, n);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    r = r * x;
    r.diagonal().array() += *it;
  }
  return r;
}

std::vector<double> derivative(const std::vector<double>& p) {
  std::vector<double> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

bool acceptable_split(const Matrix& a, const Matrix& s) {
  const double sc = op_scale(a);
  const Matrix nil = a - s;
  const Eigen::Index n = a.rows();
  if (!s.allFinite()) return false;
  if ((s * nil - nil * s).norm() > 1e-9 * sc * sc) return false;
  if (matrix_power(nil, static_cast<int>(n)).norm() > 1e-8 * std::pow(sc, static_cast<double>(n))) return false;
  return is_semisimple(s);
}

}  // namespace

AdaptedInnerProduct::AdaptedInnerProduct(Matrix gram) : gram_(std::move(gram)) {
  require_square(gram_, "gram");
  if ((gram_ - gram_.transpose()).norm() > 1e-10 * std::max(1.0, gram_.norm())) {
    throw Error(ErrorCode::InvariantViolation, "gram matrix is not symmetric");
  }
  gram_ = (0.5 * (gram_ + gram_.transpose())).eval();
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::InvariantViolation, "gram matrix is not positive definite");
  }
  chol_upper_ = llt.matrixU();
}

bool is_invertible(const Matrix& a, double tol) {
  require_square(a, "is_invertible");
  const double sc = std::pow(op_scale(a), static_cast<double>(a.rows()));
  return std::abs(a.determinant()) > tol * sc;
}

bool is_semisimple(const Matrix& s, double cluster_tol, double null_tol) {
  require_square(s, "is_semisimple");
  Eigen::EigenSolver<Matrix> es(s, false);
  if (es.info() != Eigen::Success) return false;
  const ComplexVector ev = es.eigenvalues();
  const double rho = ev.cwiseAbs().maxCoeff();
  const auto cl = clusters_of(ev, cluster_tol * std::max(1.0, rho));
  const double cut = null_tol * op_scale(s);
  const Eigen::Index n = s.rows();
  for (const auto& c : cl) {
    ComplexMatrix shifted = s.cast<std::complex<double>>();
    shifted.diagonal().array() -= c.mean;
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
    int small = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (svd.singularValues()(i) <= cut) ++small;
    }
    if (small < c.multiplicity) return false;
  }
  return true;
}

double eigenvector_condition(const Matrix& s) {
  Eigen::EigenSolver<Matrix> es(s, true);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<ComplexMatrix> svd(es.eigenvectors());
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

JCDecomposition jordan_chevalley(const Matrix& a) {
  require_square(a, "jordan_chevalley");
  if (!a.allFinite()) throw Error(ErrorCode::SingularInput, "non-finite entries");
  if (!is_invertible(a)) throw Error(ErrorCode::SingularInput, "matrix is not invertible", a.determinant());

  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "eigenvalue computation failed");
  const ComplexVector ev = es.eigenvalues();
  const double rho = std::max(1.0, ev.cwiseAbs().maxCoeff());

  // Fine to coarse: the first clustering whose Chevalley iterate passes all
  // checks wins. Coarser levels absorb the spread of defective eigenvalues.
  for (double rel : {1e-10, 1e-8, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
    const double tol = rel * rho;
    const auto cl = clusters_of(ev, tol);
    const auto p = squarefree_polynomial(cl, tol);
    const auto dp = derivative(p);
    Matrix s = a;
    for (int it = 0; it < 100; ++it) {
      const Matrix ps = eval_poly(p, s);
      if (ps.norm() <= 1e-15 * std::pow(rho, static_cast<double>(p.size() - 1)) * a.rows()) break;
      Eigen::PartialPivLU<Matrix> lu(eval_poly(dp, s));
      const Matrix step = lu.solve(ps);
      if (!step.allFinite()) break;
      s -= step;
      if (step.norm() <= 1e-15 * op_scale(s)) break;
    }
    if (acceptable_split(a, s)) return {s, a - s};
  }

  if (is_semisimple(a)) return {a, Matrix::Zero(a.rows(), a.cols())};
  throw Error(ErrorCode::NoConvergence, "Chevalley iteration did not produce a semisimple part");
}

SUDecomposition su_decomposition(const Matrix& a) {
  const JCDecomposition jc = jordan_chevalley(a);
  const Matrix unip = jc.semisimple.partialPivLu().solve(a);
  return {jc.semisimple, matrix_log_unipotent(unip, 1e-6)};
}

Matrix matrix_exp(const Matrix& a) {
  require_square(a, "matrix_exp");
  return a.exp();
}

Matrix matrix_log_unipotent(const Matrix& u, double tol) {
  require_square(u, "matrix_log_unipotent");
  const Eigen::Index n = u.rows();
  const Matrix d = u - Matrix::Identity(n, n);
  // Relative test: a small but non-nilpotent U - I must not slip through.
  const double dnorm = d.norm();
  const Matrix dn = matrix_power(d, static_cast<int>(n));
  if (dnorm > 1e-13 && dn.norm() > tol * std::pow(dnorm, static_cast<double>(n))) {
    throw Error(ErrorCode::NotUnipotent, "U - I is not nilpotent", dn.norm());
  }
  Matrix result = Matrix::Zero(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (Eigen::Index j = 1; j <= n; ++j) {
    term = term * d;
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    result += (sign / static_cast<double>(j)) * term;
  }
  return result;
}

Matrix matrix_log(const Matrix& a) {
  require_square(a, "matrix_log");
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "eigenvalue computation failed");
  const double sc = op_scale(a);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-12 * sc && z.real() <= 1e-12 * sc) {
      throw Error(ErrorCode::NoRealLogarithm, "eigenvalue on the closed negative real axis", z.real());
    }
  }
  return a.log();
}

}  // namespace eqnf
