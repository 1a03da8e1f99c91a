#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace torusdiv {

using Int = mpz_class;
using Rat = mpq_class;

/// Error raised when an input value violates an operation's contract.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

inline Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// base^e for integer e (negative allowed); base must be nonzero when e < 0.
Rat rat_pow(const Rat& base, long e);

/// Componentwise power of a point with nonzero coordinates.
std::vector<Rat> point_pow(const std::vector<Rat>& x, long e);

/// Parses "p", "-p" or "p/q" (decimal digits). Throws InputError on bad syntax
/// or zero denominator.
Rat parse_rational(const std::string& s);

/// Canonical form: "p" or "p/q" with the sign on the numerator.
std::string format_rational(const Rat& q);

/// Parses a decimal literal such as "-1.25" or "1.41421356237309504880"
/// into the exact rational it denotes.
Rat parse_decimal(const std::string& s);

}  // namespace torusdiv
