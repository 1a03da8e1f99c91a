#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torusdiv/lattice.hpp"
#include "torusdiv/numeric.hpp"

namespace torusdiv {

using Exponents = std::vector<long>;

/// Graded lexicographic order on exponent vectors (total degree, then lex).
/// Used for term storage and serialization so output is deterministic.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position(position) {}
  std::size_t position;
};

/// Laurent polynomial over Q in dim variables: a finite map from integer
/// exponent vectors to nonzero rational coefficients. The zero polynomial is
/// the empty map.
class LaurentPoly {
 public:
  using TermMap = std::map<Exponents, Rat, GrlexLess>;

  explicit LaurentPoly(long dim = 0) : dim_(dim) {}

  static LaurentPoly constant(long dim, const Rat& c);
  static LaurentPoly monomial(long dim, const Exponents& u, const Rat& c);
  static LaurentPoly variable(long dim, long index);  // X_{index+1}

  long dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  /// Adds c * X^u, erasing the term if the coefficient cancels.
  void add_term(const Exponents& u, const Rat& c);

  Rat coefficient(const Exponents& u) const;
  bool operator==(const LaurentPoly& o) const = default;

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly operator-() const;

  /// Componentwise minimum exponent over the support (support must be
  /// nonempty).
  Exponents min_exponents() const;

 private:
  long dim_;
  TermMap terms_;
};

/// Parses the text syntax: variables X1..Xd, '^' with integer exponents,
/// '*', '+', '-', parentheses, rational coefficients "a/b". Throws ParseError
/// with a position on bad input.
LaurentPoly parse_laurent(const std::string& text, long dim);

/// Canonical rendering; parse_laurent(to_string(f), f.dim()) == f.
std::string to_string(const LaurentPoly& f);

/// Exact value at a point with nonzero rational coordinates.
Rat evaluate(const LaurentPoly& f, const std::vector<Rat>& x);

/// Quotient q with f = g * q in the Laurent ring, or nullopt when none
/// exists. g must be nonzero.
std::optional<LaurentPoly> exact_divide(const LaurentPoly& f, const LaurentPoly& g);

/// f composed with the monomial map given by a (dim(f) x s): the image of the
/// i-th old variable is prod_j Y_j^{a[i][j]}; a term X^u maps to Y^{u.a}.
LaurentPoly monomial_substitute(const LaurentPoly& f, const IntMatrix& a);

/// X^{-u0} * f for u0 in the support; the result has a nonzero constant term.
LaurentPoly reduce_at(const LaurentPoly& f, const Exponents& u0);

/// f(x1*X1, ..., xd*Xd): rescales each coefficient by x^u.
LaurentPoly translate_by_point(const LaurentPoly& f, const std::vector<Rat>& x);

/// Stabilizer of the divisor cut out by a reduced f, as an algebraic group:
/// identity-component dimension plus the invariant factors of the finite
/// quotient. Computed from the lattice of support differences.
struct StabilizerInfo {
  long dimension = 0;
  std::vector<Int> invariant_factors;

  bool trivial() const { return dimension == 0 && invariant_factors.empty(); }
  bool operator==(const StabilizerInfo&) const = default;
};

StabilizerInfo stabilizer(const LaurentPoly& f);

/// When the stabilizer has positive dimension, a unimodular change of
/// variables after which f depends only on the first rank variables (up to a
/// monomial factor), together with the rewritten polynomial in those
/// variables.
struct OmittedForm {
  IntMatrix change;     // unimodular dim x dim
  LaurentPoly reduced;  // over rank(support lattice) variables
};

std::optional<OmittedForm> omit_variables(const LaurentPoly& f);

/// Monomial map between tori, given by its exponent matrix
/// (target dimension x source dimension): phi(x)_i = prod_j x_j^{e[i][j]}.
struct TorusMorphism {
  IntMatrix exponents;

  long source_dim() const { return exponents.cols(); }
  long target_dim() const { return exponents.rows(); }

  std::vector<Rat> apply(const std::vector<Rat>& x) const;
  /// Pull-back of a function on the target: f of dim target_dim.
  LaurentPoly pullback(const LaurentPoly& f) const;
  bool is_isogeny() const;
  bool is_etale() const { return is_isogeny(); }
};

}  // namespace torusdiv
