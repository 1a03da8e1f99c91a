#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torusdiv/numeric.hpp"

namespace torusdiv {

/// The finite set S of rational primes; the archimedean place is implicit.
class PrimeSet {
 public:
  PrimeSet() = default;
  explicit PrimeSet(std::vector<Int> primes);

  static PrimeSet of(std::initializer_list<long> primes);

  bool contains(const Int& p) const;
  void insert(const Int& p);
  bool empty() const { return primes_.empty(); }
  std::size_t size() const { return primes_.size(); }
  const std::vector<Int>& primes() const { return primes_; }

 private:
  std::vector<Int> primes_;  // strictly ascending, all prime
};

/// A nonzero rational in fully factored form: (-1)^s * prod p^e.
/// Exponents are nonzero; keys ascend.
struct FactoredRational {
  int sign = 1;                    // +1 or -1
  std::map<Int, long> exponents;   // prime -> nonzero exponent

  static FactoredRational one() { return FactoredRational{}; }
  static FactoredRational minus_one() { return FactoredRational{-1, {}}; }

  bool is_one() const { return sign == 1 && exponents.empty(); }
  bool is_unit_pm1() const { return exponents.empty(); }
  bool positive() const { return sign == 1; }

  Rat value() const;
  FactoredRational inverse() const;
  FactoredRational pow(long e) const;

  friend FactoredRational operator*(const FactoredRational& a, const FactoredRational& b);
  friend FactoredRational operator/(const FactoredRational& a, const FactoredRational& b);
  friend bool operator==(const FactoredRational& a, const FactoredRational& b) = default;
};

/// Raised when a cofactor resists the configured factoring effort. Carries the
/// factors found so far and the surviving composite, so callers can report the
/// failure precisely instead of guessing.
class FactorError : public std::runtime_error {
 public:
  FactorError(std::string what, Int cofactor, std::map<Int, long> partial)
      : std::runtime_error(std::move(what)),
        cofactor(std::move(cofactor)),
        partial(std::move(partial)) {}

  Int cofactor;
  std::map<Int, long> partial;
};

struct FactorOptions {
  unsigned long trial_limit = 1'000'000;  // trial division bound
  unsigned long pm1_bound = 100'000;      // Pollard p-1 stage-1 bound
  unsigned long long rho_budget = 1ull << 26;  // Brent iterations per cofactor
  unsigned max_bits = 4096;               // inputs above this are rejected outright
  unsigned long seed = 0x5eed;            // rho polynomial constants
};

/// Deterministic Miller-Rabin below 3.3e24, Baillie-PSW above.
bool is_prime(const Int& n);

/// Full factorization of a nonzero integer. Throws FactorError when a
/// composite cofactor survives the effort budget; never returns a partial
/// answer silently.
FactoredRational factor(const Int& n, const FactorOptions& opts = {});

/// Factorization of a nonzero rational (numerator over denominator).
FactoredRational factor_rational(const Rat& q, const FactorOptions& opts = {});

/// Exponent of p in q (0 when p does not occur).
long valuation(const FactoredRational& q, const Int& p);

/// v_p(q) >= 0 at every prime p outside S.
bool is_s_integer(const FactoredRational& q, const PrimeSet& s);

/// v_p(q) == 0 at every prime p outside S.
bool is_s_unit(const FactoredRational& q, const PrimeSet& s);

/// a | b in the ring of S-integers, i.e. v_p(b) >= v_p(a) for all p outside S.
/// Both arguments must be S-integers.
bool s_divides(const FactoredRational& a, const FactoredRational& b, const PrimeSet& s);

/// Primes p outside S with v_p(q) >= 1; q must be an S-integer.
std::vector<Int> s_support(const FactoredRational& q, const PrimeSet& s);

/// Shared prime table for trial division (ascending primes below 10^6).
const std::vector<unsigned long>& small_primes();

}  // namespace torusdiv
