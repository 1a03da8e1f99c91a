#pragma once

#include <optional>
#include <vector>

#include "torusdiv/factor.hpp"
#include "torusdiv/lattice.hpp"

namespace torusdiv {

/// Canonical presentation of a finitely generated subgroup of Q*.
/// basis elements are multiplicatively independent; torsion_order is 2
/// exactly when -1 lies in the group. Basis elements are positive whenever
/// a positive generating set exists; a group like <-2> keeps its signed
/// generator (it is torsion-free but has no positive basis).
struct GroupBasis {
  std::vector<FactoredRational> basis;
  int torsion_order = 1;          // 1 or 2
  std::vector<Int> prime_index;   // ascending primes appearing in the basis

  long rank() const { return static_cast<long>(basis.size()); }
};

/// x written over a GroupBasis: x = (-1)^negated * prod basis_i^exponents_i.
/// negated can only be set when the basis has torsion_order 2.
struct Expression {
  std::vector<Int> exponents;
  bool negated = false;
};

/// Canonical basis of the subgroup of Q* generated by gens (all nonzero).
/// An empty generator list yields the rank-0 trivial group.
GroupBasis group_basis(const std::vector<FactoredRational>& gens);

/// Membership with certificate; nullopt when x does not lie in the group.
std::optional<Expression> express(const FactoredRational& x, const GroupBasis& b);

/// Reconstructs the rational b.basis^expr (including the torsion sign).
FactoredRational reconstruct(const Expression& e, const GroupBasis& b);

/// No nontrivial multiplicative relation among the generators.
bool is_independent(const std::vector<FactoredRational>& gens);

/// Minimal d >= 1 with x^d in <gens>, decided exactly; nullopt when no power
/// of x lies in the group.
std::optional<Int> power_index(const FactoredRational& x,
                               const std::vector<FactoredRational>& gens);

/// Integer exponents e with x = prod gens_i^{e_i} exactly (signs included);
/// unique when the generators are independent. nullopt when x has no such
/// representation.
std::optional<std::vector<Int>> integer_exponents(const FactoredRational& x,
                                                  const std::vector<FactoredRational>& gens);

}  // namespace torusdiv
