#pragma once

#include "eqnf/linalg.hpp"

#include <string>
#include <vector>

namespace eqnf {

/// Character values, aligned with GroupData::elements. Entries are +1 or -1.
using Character = std::vector<double>;

/// Finite matrix group with a real one-dimensional character.
struct GroupData {
  std::vector<Matrix> elements;
  Character chi;
  std::vector<std::vector<int>> mult_table;  // mult_table[a][b] = index of a*b
  std::vector<int> inverse;
  int identity_index = -1;

  Eigen::Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }
  std::size_t order() const { return elements.size(); }
};

/// Elements {g : chi(g) = 1} and {g A0 : chi(g) = -1}, in the order of the
/// base group.
struct ExtendedGroupData {
  GroupData group;
  std::vector<bool> times_a0;  // true where the element is g*A0
};

struct GroupReport {
  std::vector<std::string> violations;
  std::vector<ErrorCode> codes;  // aligned with violations
  bool ok() const { return violations.empty(); }
};

/// Element-match tolerance for closure and lookup.
inline constexpr double kGroupMatchTol = 1e-9;

/// Index of the element equal to m within tol, or -1.
int find_element(const std::vector<Matrix>& elements, const Matrix& m, double tol = kGroupMatchTol);

/// Fills mult_table, inverse and identity_index if missing and lists every
/// violated invariant. Does not throw.
GroupReport validate_group(GroupData& gd);

/// Validates and throws NotClosed / BadCharacter on the first violation.
GroupData make_group(std::vector<Matrix> elements, Character chi);

/// Closure of the generators; characters extend multiplicatively. Throws
/// BadCharacter when the generator characters are inconsistent and NotClosed
/// when the closure exceeds max_order elements.
GroupData generate_group(const std::vector<Matrix>& generators, const Character& gen_chi,
                         std::size_t max_order = 10000);

/// Trivial group {I} in dimension n.
GroupData trivial_group(Eigen::Index n);

Character trivial_character(const GroupData& gd);

/// All real characters of gd by exhaustive search over generator images;
/// the trivial character comes first.
std::vector<Character> enumerate_characters(const GroupData& gd);

/// P^alpha(A) = (1/|G|) sum alpha(g) g A g^{-1}.
Matrix project(const Matrix& a, const GroupData& gd, const Character& alpha);
inline Matrix project(const Matrix& a, const GroupData& gd) { return project(a, gd, gd.chi); }

/// Matrix of P^alpha acting on column-major vec(A).
Matrix projection_operator(const GroupData& gd, const Character& alpha);

/// g A g^{-1} = A^{chi(g)} for all g.
bool is_chi_equivariant_linear(const Matrix& a, const GroupData& gd, double tol = 1e-9);

/// g A g^{-1} = chi(g) A for all g (Lie algebra version).
bool is_chi_equivariant_algebra(const Matrix& a, const GroupData& gd, double tol = 1e-9);

/// Throws NotEquivariant when a0 is not in GL^chi_G, NotClosed on numerical
/// closure failure.
ExtendedGroupData extended_group(const GroupData& gd, const Matrix& a0);

/// Character of the extended group induced by alpha. Throws BadCharacter if
/// the induced values break the product law.
Character tilde_character(const GroupData& gd, const ExtendedGroupData& ext, const Character& alpha);

/// Gram matrix making S0 normal and every g orthogonal; throws NotSemisimple
/// or NotEquivariant when the preconditions fail.
AdaptedInnerProduct invariant_inner_product(const Matrix& s0, const GroupData& gd);

}  // namespace eqnf
