#pragma once

#include <optional>
#include <vector>

#include "torusdiv/laurent.hpp"
#include "torusdiv/multgroup.hpp"

namespace torusdiv {

/// Raised by operations that need the combined root group to be torsion-free;
/// the caller should first split into arithmetic progressions (subsample).
class TorsionObstruction : public std::runtime_error {
 public:
  explicit TorsionObstruction(const std::string& what) : std::runtime_error(what) {}
};

struct PowerSumTerm {
  Rat coeff;  // nonzero
  Rat root;   // nonzero, pairwise distinct across terms

  bool operator==(const PowerSumTerm& o) const { return coeff == o.coeff && root == o.root; }
};

/// The function n -> sum_i coeff_i * root_i^n, in canonical form (terms
/// ordered by root, no zero coefficients, no repeated roots). The zero
/// function is the empty sum.
class PowerSum {
 public:
  PowerSum() = default;
  /// Merges repeated roots and drops cancelled terms.
  static PowerSum of(const std::vector<PowerSumTerm>& terms);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<PowerSumTerm>& terms() const { return terms_; }
  std::vector<Rat> roots() const;

  Rat eval(long n) const;

  bool operator==(const PowerSum&) const = default;

  friend PowerSum operator*(const PowerSum& a, const PowerSum& b);
  friend PowerSum operator+(const PowerSum& a, const PowerSum& b);

 private:
  std::vector<PowerSumTerm> terms_;
};

/// The power sum n -> f(g^n) for a Laurent polynomial f and a point g with
/// nonzero rational coordinates (roots g^u merge when coordinates are
/// multiplicatively dependent).
PowerSum power_sum_of(const LaurentPoly& f, const std::vector<Rat>& g);

/// Laurent polynomial F with F(u_1^n, ..., u_r^n) = f(n) over the basis u of
/// b. Every root must be expressible in the basis without the torsion sign;
/// otherwise TorsionObstruction.
LaurentPoly to_laurent(const PowerSum& f, const GroupBasis& b);

PowerSum from_laurent(const LaurentPoly& f, const GroupBasis& b);

/// g with g(n) = f(q*n + r); q >= 1.
PowerSum subsample(const PowerSum& f, long q, long r);

/// Quotient g with f2 = f1 * g identically, or nullopt when f2/f1 is not a
/// power sum. f1 must be nonzero. Throws TorsionObstruction when the combined
/// root group contains -1.
std::optional<PowerSum> divide(const PowerSum& f2, const PowerSum& f1);

/// Some root equals 1.
bool is_reduced(const PowerSum& f);

/// Basis of the multiplicative group generated by the roots; f must be
/// nonzero.
GroupBasis roots_group(const PowerSum& f);

}  // namespace torusdiv
