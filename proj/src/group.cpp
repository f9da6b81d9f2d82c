#include "eqnf/group.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <deque>

namespace eqnf {

namespace {

void add_violation(GroupReport& r, ErrorCode code, std::string msg) {
  r.violations.push_back(std::move(msg));
  r.codes.push_back(code);
}

void throw_first(const GroupReport& r) {
  if (!r.ok()) throw Error(r.codes.front(), r.violations.front());
}

}  // namespace

int find_element(const std::vector<Matrix>& elements, const Matrix& m, double tol) {
  const double sc = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].rows() == m.rows() && max_abs(elements[i] - m) <= tol * sc) return static_cast<int>(i);
  }
  return -1;
}

GroupReport validate_group(GroupData& gd) {
  GroupReport rep;
  const std::size_t order = gd.elements.size();
  if (order == 0) {
    add_violation(rep, ErrorCode::NotClosed, "group has no elements");
    return rep;
  }
  const Eigen::Index n = gd.dim();
  for (std::size_t i = 0; i < order; ++i) {
    if (gd.elements[i].rows() != n || gd.elements[i].cols() != n) {
      add_violation(rep, ErrorCode::DimensionMismatch, "element " + std::to_string(i) + " has the wrong shape");
      return rep;
    }
  }
  if (gd.chi.size() != order) {
    add_violation(rep, ErrorCode::BadCharacter, "character has " + std::to_string(gd.chi.size()) +
                                                    " values for " + std::to_string(order) + " elements");
    return rep;
  }
  for (std::size_t i = 0; i < order; ++i) {
    if (std::abs(std::abs(gd.chi[i]) - 1.0) > 1e-12) {
      add_violation(rep, ErrorCode::BadCharacter, "character value at " + std::to_string(i) + " is not +-1");
    }
  }

  if (gd.mult_table.size() != order) {
    gd.mult_table.assign(order, std::vector<int>(order, -1));
    for (std::size_t a = 0; a < order; ++a) {
      for (std::size_t b = 0; b < order; ++b) {
        gd.mult_table[a][b] = find_element(gd.elements, gd.elements[a] * gd.elements[b]);
      }
    }
  }
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      if (gd.mult_table[a][b] < 0) {
        add_violation(rep, ErrorCode::NotClosed,
                      "product of elements " + std::to_string(a) + " and " + std::to_string(b) + " is not in the group");
      }
    }
  }
  if (!rep.ok()) return rep;

  gd.identity_index = find_element(gd.elements, Matrix::Identity(n, n));
  if (gd.identity_index < 0) {
    add_violation(rep, ErrorCode::NotClosed, "identity is missing");
    return rep;
  }
  gd.inverse.assign(order, -1);
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      if (gd.mult_table[a][b] == gd.identity_index) gd.inverse[a] = static_cast<int>(b);
    }
    if (gd.inverse[a] < 0) add_violation(rep, ErrorCode::NotClosed, "element " + std::to_string(a) + " has no inverse");
  }
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      const int ab = gd.mult_table[a][b];
      if (std::abs(gd.chi[ab] - gd.chi[a] * gd.chi[b]) > 1e-12) {
        add_violation(rep, ErrorCode::BadCharacter,
                      "chi(gh) != chi(g)chi(h) at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      }
    }
  }
  return rep;
}

GroupData make_group(std::vector<Matrix> elements, Character chi) {
  GroupData gd;
  gd.elements = std::move(elements);
  gd.chi = std::move(chi);
  throw_first(validate_group(gd));
  return gd;
}

GroupData generate_group(const std::vector<Matrix>& generators, const Character& gen_chi, std::size_t max_order) {
  if (generators.size() != gen_chi.size()) {
    throw Error(ErrorCode::BadCharacter, "one character value per generator is required");
  }
  if (generators.empty()) throw Error(ErrorCode::DimensionMismatch, "no generators given");
  const Eigen::Index n = generators.front().rows();
  for (const auto& g : generators) {
    require_square(g, "generator");
    require_same_dim(g.rows(), n, "generator dimension");
    if (!is_invertible(g)) throw Error(ErrorCode::NotClosed, "generator is not invertible");
  }
  for (double c : gen_chi) {
    if (std::abs(std::abs(c) - 1.0) > 1e-12) throw Error(ErrorCode::BadCharacter, "generator character is not +-1");
  }

  GroupData gd;
  gd.elements.push_back(Matrix::Identity(n, n));
  gd.chi.push_back(1.0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t e = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < generators.size(); ++s) {
      const Matrix prod = gd.elements[e] * generators[s];
      const double c = gd.chi[e] * gen_chi[s];
      const int idx = find_element(gd.elements, prod);
      if (idx >= 0) {
        if (std::abs(gd.chi[idx] - c) > 1e-12) {
          throw Error(ErrorCode::BadCharacter, "generator characters do not extend to a homomorphism");
        }
        continue;
      }
      if (gd.elements.size() >= max_order) {
        throw Error(ErrorCode::NotClosed, "closure exceeds " + std::to_string(max_order) + " elements");
      }
      gd.elements.push_back(prod);
      gd.chi.push_back(c);
      queue.push_back(gd.elements.size() - 1);
    }
  }
  throw_first(validate_group(gd));
  return gd;
}

GroupData trivial_group(Eigen::Index n) { return make_group({Matrix::Identity(n, n)}, {1.0}); }

Character trivial_character(const GroupData& gd) { return Character(gd.order(), 1.0); }

std::vector<Character> enumerate_characters(const GroupData& gd) {
  const std::size_t order = gd.order();
  // Greedy generating set: add an element while it enlarges the span.
  std::vector<int> gens;
  std::vector<bool> reached(order, false);
  auto close = [&]() {
    std::fill(reached.begin(), reached.end(), false);
    reached[gd.identity_index] = true;
    std::deque<int> q{gd.identity_index};
    while (!q.empty()) {
      const int e = q.front();
      q.pop_front();
      for (int s : gens) {
        const int t = gd.mult_table[e][s];
        if (!reached[t]) {
          reached[t] = true;
          q.push_back(t);
        }
      }
    }
  };
  close();
  for (std::size_t i = 0; i < order; ++i) {
    if (!reached[i]) {
      gens.push_back(static_cast<int>(i));
      close();
    }
  }

  std::vector<Character> out;
  const std::size_t r = gens.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
    Character val(order, 0.0);
    val[gd.identity_index] = 1.0;
    std::deque<int> q{gd.identity_index};
    bool consistent = true;
    while (!q.empty() && consistent) {
      const int e = q.front();
      q.pop_front();
      for (std::size_t j = 0; j < r && consistent; ++j) {
        const double v = val[e] * ((mask >> j) & 1u ? -1.0 : 1.0);
        const int t = gd.mult_table[e][gens[j]];
        if (val[t] == 0.0) {
          val[t] = v;
          q.push_back(t);
        } else if (val[t] != v) {
          consistent = false;
        }
      }
    }
    if (consistent) out.push_back(std::move(val));
  }
  return out;
}

Matrix project(const Matrix& a, const GroupData& gd, const Character& alpha) {
  require_same_dim(a.rows(), gd.dim(), "project");
  require_same_dim(a.cols(), gd.dim(), "project");
  require_same_dim(static_cast<Eigen::Index>(alpha.size()), static_cast<Eigen::Index>(gd.order()), "character size");
  Matrix acc = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t i = 0; i < gd.order(); ++i) {
    acc += alpha[i] * gd.elements[i] * a * gd.elements[gd.inverse[i]];
  }
  return acc / static_cast<double>(gd.order());
}

Matrix projection_operator(const GroupData& gd, const Character& alpha) {
  const Eigen::Index n = gd.dim();
  Matrix acc = Matrix::Zero(n * n, n * n);
  for (std::size_t i = 0; i < gd.order(); ++i) {
    const Matrix& g = gd.elements[i];
    const Matrix ginv_t = gd.elements[gd.inverse[i]].transpose();
    acc += alpha[i] * Matrix(Eigen::kroneckerProduct(ginv_t, g));
  }
  return acc / static_cast<double>(gd.order());
}

bool is_chi_equivariant_linear(const Matrix& a, const GroupData& gd, double tol) {
  require_same_dim(a.rows(), gd.dim(), "is_chi_equivariant_linear");
  const Matrix ainv = a.inverse();
  const double sc = std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < gd.order(); ++i) {
    const Matrix lhs = gd.elements[i] * a * gd.elements[gd.inverse[i]];
    const Matrix& rhs = gd.chi[i] > 0 ? a : ainv;
    if (max_abs(lhs - rhs) > tol * sc) return false;
  }
  return true;
}

bool is_chi_equivariant_algebra(const Matrix& a, const GroupData& gd, double tol) {
  require_same_dim(a.rows(), gd.dim(), "is_chi_equivariant_algebra");
  const double sc = std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < gd.order(); ++i) {
    const Matrix lhs = gd.elements[i] * a * gd.elements[gd.inverse[i]];
    if (max_abs(lhs - gd.chi[i] * a) > tol * sc) return false;
  }
  return true;
}

ExtendedGroupData extended_group(const GroupData& gd, const Matrix& a0) {
  require_same_dim(a0.rows(), gd.dim(), "extended_group");
  if (!is_chi_equivariant_linear(a0, gd)) {
    throw Error(ErrorCode::NotEquivariant, "A0 is not chi-equivariant");
  }
  ExtendedGroupData ext;
  std::vector<Matrix> elems;
  for (std::size_t i = 0; i < gd.order(); ++i) {
    const bool rev = gd.chi[i] < 0;
    elems.push_back(rev ? Matrix(gd.elements[i] * a0) : gd.elements[i]);
    ext.times_a0.push_back(rev);
  }
  ext.group.elements = std::move(elems);
  ext.group.chi = gd.chi;
  GroupReport rep = validate_group(ext.group);
  for (std::size_t i = 0; i < rep.codes.size(); ++i) {
    if (rep.codes[i] == ErrorCode::NotClosed) throw Error(ErrorCode::NotClosed, rep.violations[i]);
  }
  // Any remaining violation concerns the transported character, which the
  // caller checks through tilde_character.
  return ext;
}

Character tilde_character(const GroupData& gd, const ExtendedGroupData& ext, const Character& alpha) {
  require_same_dim(static_cast<Eigen::Index>(alpha.size()), static_cast<Eigen::Index>(gd.order()), "character size");
  // Both rules read off alpha at the underlying base element.
  Character out = alpha;
  const auto& tab = ext.group.mult_table;
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t b = 0; b < out.size(); ++b) {
      if (std::abs(out[tab[a][b]] - out[a] * out[b]) > 1e-12) {
        throw Error(ErrorCode::BadCharacter, "induced character fails the product law");
      }
    }
  }
  return out;
}

AdaptedInnerProduct invariant_inner_product(const Matrix& s0, const GroupData& gd) {
  require_square(s0, "invariant_inner_product");
  require_same_dim(s0.rows(), gd.dim(), "invariant_inner_product");
  if (!is_semisimple(s0)) throw Error(ErrorCode::NotSemisimple, "S0 is not semisimple");
  if (!is_chi_equivariant_linear(s0, gd)) throw Error(ErrorCode::NotEquivariant, "S0 is not chi-equivariant");

  const Eigen::Index n = s0.rows();
  Eigen::EigenSolver<Matrix> es(s0, false);
  const ComplexVector ev = es.eigenvalues();
  const double rho = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double ktol = 1e-8 * std::max(1.0, s0.norm() * s0.norm());

  // Group eigenvalues into real values and conjugate pairs (upper half-plane
  // representative only).
  std::vector<std::complex<double>> reps;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    std::complex<double> z = ev(i);
    if (std::abs(z.imag()) <= 1e-7 * rho) z = z.real();
    if (z.imag() < 0) z = std::conj(z);
    bool seen = false;
    for (const auto& r : reps) seen = seen || std::abs(r - z) <= 1e-5 * rho;
    if (!seen) reps.push_back(z);
  }

  Matrix basis(n, 0);
  std::vector<Matrix> block_grams;
  for (const auto& z : reps) {
    Matrix q;
    Matrix gram_block;
    if (z.imag() == 0.0) {
      Matrix shifted = s0;
      shifted.diagonal().array() -= z.real();
      q = kernel_basis(shifted, ktol);
      gram_block = Matrix::Identity(q.cols(), q.cols());
    } else {
      Matrix shifted = s0;
      shifted.diagonal().array() -= z.real();
      const Matrix quad = shifted * shifted + z.imag() * z.imag() * Matrix::Identity(n, n);
      q = kernel_basis(quad, ktol);
      const Matrix j = q.transpose() * shifted * q / z.imag();
      gram_block = 0.5 * (Matrix::Identity(q.cols(), q.cols()) + j.transpose() * j);
    }
    Matrix widened(n, basis.cols() + q.cols());
    widened << basis, q;
    basis = widened;
    block_grams.push_back(gram_block);
  }
  if (basis.cols() != n) {
    throw Error(ErrorCode::NotSemisimple, "eigenspaces do not span the space", static_cast<double>(basis.cols()));
  }
  Matrix gy = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : block_grams) {
    gy.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  const Matrix binv = basis.inverse();
  const Matrix g2 = binv.transpose() * gy * binv;

  Matrix g3 = Matrix::Zero(n, n);
  for (const auto& g : gd.elements) g3 += g.transpose() * g2 * g;
  g3 /= static_cast<double>(gd.order());
  g3 = (0.5 * (g3 + g3.transpose())).eval();
  return AdaptedInnerProduct(g3);
}

}  // namespace eqnf
