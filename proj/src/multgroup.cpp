#include "torusdiv/multgroup.hpp"

#include <algorithm>
#include <set>

namespace torusdiv {

namespace {

std::vector<Int> prime_union(const std::vector<FactoredRational>& xs) {
  std::set<Int> s;
  for (const auto& x : xs)
    for (const auto& [p, e] : x.exponents) s.insert(p);
  return std::vector<Int>(s.begin(), s.end());
}

// Exponent vector of x over the given prime list, with the sign parity as a
// trailing coordinate. Q* = Z/2 x (direct sum over primes of Z); the sign
// coordinate lives mod 2, which callers encode by adding a (0,...,0,2) row.
std::vector<Int> signed_vector(const FactoredRational& x, const std::vector<Int>& primes) {
  std::vector<Int> v(primes.size() + 1, Int(0));
  for (std::size_t j = 0; j < primes.size(); ++j) v[j] = valuation(x, primes[j]);
  v[primes.size()] = x.sign < 0 ? 1 : 0;
  return v;
}

FactoredRational from_signed_vector(const std::vector<Int>& v, const std::vector<Int>& primes) {
  FactoredRational r;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    if (v[j] == 0) continue;
    if (!v[j].fits_slong_p()) throw InputError("group element exponent overflow");
    r.exponents[primes[j]] = v[j].get_si();
  }
  r.sign = mpz_odd_p(v[primes.size()].get_mpz_t()) ? -1 : 1;
  return r;
}

// Generator matrix of the group lattice in Z^{m+1}: one row per basis element
// plus the torsion row that closes the sign coordinate mod 2 (or realizes -1).
IntMatrix group_lattice(const GroupBasis& b, const std::vector<Int>& primes) {
  long k = b.rank();
  IntMatrix m(k + 1, static_cast<long>(primes.size()) + 1);
  for (long i = 0; i < k; ++i) {
    auto v = signed_vector(b.basis[i], primes);
    for (long j = 0; j < m.cols(); ++j) m.at(i, j) = v[j];
  }
  m.at(k, m.cols() - 1) = b.torsion_order == 2 ? 1 : 2;
  return m;
}

}  // namespace

GroupBasis group_basis(const std::vector<FactoredRational>& gens) {
  std::vector<Int> primes = prime_union(gens);
  long m = static_cast<long>(primes.size());
  IntMatrix a(static_cast<long>(gens.size()) + 1, m + 1);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    auto v = signed_vector(gens[i], primes);
    for (long j = 0; j <= m; ++j) a.at(static_cast<long>(i), j) = v[j];
  }
  a.at(static_cast<long>(gens.size()), m) = 2;  // (-1)^2 = 1
  HnfResult f = hnf(a);

  GroupBasis out;
  for (long i = 0; i < f.rank; ++i) {
    long pcol = -1;
    for (long j = 0; j <= m; ++j)
      if (f.h.at(i, j) != 0) { pcol = j; break; }
    if (pcol < m) {
      out.basis.push_back(from_signed_vector(f.h.row(i), primes));
    } else {
      // Pivot in the sign column: entry 1 realizes -1, entry 2 is the
      // identity closure row.
      out.torsion_order = f.h.at(i, pcol) == 1 ? 2 : 1;
    }
  }
  out.prime_index = prime_union(out.basis);
  return out;
}

std::optional<Expression> express(const FactoredRational& x, const GroupBasis& b) {
  // A prime outside the basis support cannot cancel.
  for (const auto& [p, e] : x.exponents)
    if (!std::binary_search(b.prime_index.begin(), b.prime_index.end(), p))
      return std::nullopt;
  IntMatrix m = group_lattice(b, b.prime_index);
  auto y = solve_integral(m, signed_vector(x, b.prime_index));
  if (!y) return std::nullopt;
  Expression e;
  e.exponents.assign(y->begin(), y->end() - 1);
  e.negated = b.torsion_order == 2 && mpz_odd_p(y->back().get_mpz_t());
  return e;
}

FactoredRational reconstruct(const Expression& e, const GroupBasis& b) {
  FactoredRational r = e.negated ? FactoredRational::minus_one() : FactoredRational::one();
  for (std::size_t i = 0; i < e.exponents.size(); ++i) {
    if (!e.exponents[i].fits_slong_p()) throw InputError("expression exponent overflow");
    r = r * b.basis[i].pow(e.exponents[i].get_si());
  }
  return r;
}

bool is_independent(const std::vector<FactoredRational>& gens) {
  // Any relation on the prime-exponent vectors yields a true multiplicative
  // relation after squaring, so independence is exactly full row rank there.
  std::vector<Int> primes = prime_union(gens);
  IntMatrix a(static_cast<long>(gens.size()), static_cast<long>(primes.size()));
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < primes.size(); ++j)
      a.at(static_cast<long>(i), static_cast<long>(j)) = valuation(gens[i], primes[j]);
  return hnf(a).rank == static_cast<long>(gens.size());
}

std::optional<std::vector<Int>> integer_exponents(const FactoredRational& x,
                                                  const std::vector<FactoredRational>& gens) {
  std::set<Int> universe;
  for (const auto& g : gens)
    for (const auto& [p, e] : g.exponents) universe.insert(p);
  for (const auto& [p, e] : x.exponents) universe.insert(p);
  std::vector<Int> primes(universe.begin(), universe.end());
  long m = static_cast<long>(primes.size());
  IntMatrix a(static_cast<long>(gens.size()) + 1, m + 1);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    auto v = signed_vector(gens[i], primes);
    for (long j = 0; j <= m; ++j) a.at(static_cast<long>(i), j) = v[j];
  }
  a.at(static_cast<long>(gens.size()), m) = 2;
  auto y = solve_integral(a, signed_vector(x, primes));
  if (!y) return std::nullopt;
  return std::vector<Int>(y->begin(), y->end() - 1);
}

std::optional<Int> power_index(const FactoredRational& x,
                               const std::vector<FactoredRational>& gens) {
  GroupBasis b = group_basis(gens);
  std::set<Int> universe(b.prime_index.begin(), b.prime_index.end());
  for (const auto& [p, e] : x.exponents) universe.insert(p);
  std::vector<Int> primes(universe.begin(), universe.end());

  IntMatrix m = group_lattice(b, primes);
  auto target = signed_vector(x, primes);
  std::vector<Rat> rhs(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) rhs[i] = Rat(target[i]);
  auto y = solve_rational(m, rhs);
  if (!y) return std::nullopt;
  Int d(1);
  for (const Rat& c : *y) {
    Int den(c.get_den());
    d = lcm(d, den);
  }
  return d;
}

}  // namespace torusdiv
