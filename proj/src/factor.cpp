#include "torusdiv/factor.hpp"

#include <algorithm>
#include <cstdint>
#include <mutex>

namespace torusdiv {

// ---------------------------------------------------------------------------
// PrimeSet

PrimeSet::PrimeSet(std::vector<Int> primes) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const Int& p : primes) {
    if (!is_prime(p)) throw InputError("PrimeSet: " + p.get_str() + " is not prime");
  }
  primes_ = std::move(primes);
}

PrimeSet PrimeSet::of(std::initializer_list<long> primes) {
  std::vector<Int> v;
  for (long p : primes) v.emplace_back(p);
  return PrimeSet(std::move(v));
}

bool PrimeSet::contains(const Int& p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p);
}

void PrimeSet::insert(const Int& p) {
  if (!is_prime(p)) throw InputError("PrimeSet: " + p.get_str() + " is not prime");
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) primes_.insert(it, p);
}

// ---------------------------------------------------------------------------
// FactoredRational

Rat FactoredRational::value() const {
  Int num(1), den(1);
  for (const auto& [p, e] : exponents) {
    if (e > 0)
      num *= int_pow(p, static_cast<unsigned long>(e));
    else
      den *= int_pow(p, static_cast<unsigned long>(-e));
  }
  if (sign < 0) num = -num;
  Rat q(num, den);
  q.canonicalize();
  return q;
}

FactoredRational FactoredRational::inverse() const {
  FactoredRational r;
  r.sign = sign;
  for (const auto& [p, e] : exponents) r.exponents[p] = -e;
  return r;
}

FactoredRational FactoredRational::pow(long e) const {
  FactoredRational r;
  if (e == 0) return r;
  r.sign = (sign < 0 && (e % 2 != 0)) ? -1 : 1;
  for (const auto& [p, k] : exponents) r.exponents[p] = k * e;
  return r;
}

FactoredRational operator*(const FactoredRational& a, const FactoredRational& b) {
  FactoredRational r = a;
  r.sign = a.sign * b.sign;
  for (const auto& [p, e] : b.exponents) {
    long& slot = r.exponents[p];
    slot += e;
    if (slot == 0) r.exponents.erase(p);
  }
  return r;
}

FactoredRational operator/(const FactoredRational& a, const FactoredRational& b) {
  return a * b.inverse();
}

// ---------------------------------------------------------------------------
// Prime table

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> table = [] {
    const unsigned long limit = 1'000'000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<unsigned long> primes;
    for (unsigned long i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (unsigned long j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
  }();
  return table;
}

// ---------------------------------------------------------------------------
// Primality

namespace {

// Strong probable-prime test to base a; n odd, n > 2, n = d*2^s + 1.
bool miller_rabin_witness_ok(const Int& n, const Int& d, unsigned long s, const Int& a) {
  Int x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

// Strong Lucas probable-prime test with Selfridge's parameter choice.
bool strong_lucas_ok(const Int& n) {
  // Find D in 5, -7, 9, -11, ... with jacobi(D, n) == -1.
  Int d(5);
  while (true) {
    int j = mpz_jacobi(d.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0 && abs(d) != n) return false;  // proper factor found
    d = d > 0 ? Int(-(d + 2)) : Int(-(d - 2));
    if (abs(d) > 1000) {
      // n is square (or pathological); squares are composite here.
      if (mpz_perfect_square_p(n.get_mpz_t())) return false;
    }
  }
  // P = 1, Q = (1 - D) / 4.
  Int q = (1 - d) / 4;
  Int m = n + 1;
  unsigned long s = mpz_scan1(m.get_mpz_t(), 0);
  Int t = m >> s;

  // Compute U_t, V_t (mod n) by the binary chain.
  Int u(1), v(1), qk = q % n;  // U_1, V_1, Q^1
  long bits = mpz_sizeinbase(t.get_mpz_t(), 2);
  for (long i = bits - 2; i >= 0; --i) {
    // double: U_{2k} = U_k * V_k, V_{2k} = V_k^2 - 2 Q^k
    u = (u * v) % n;
    v = (v * v - 2 * qk) % n;
    qk = (qk * qk) % n;
    if (mpz_tstbit(t.get_mpz_t(), i)) {
      // add one: U_{k+1} = (P*U + V)/2, V_{k+1} = (D*U + P*V)/2 with P = 1
      Int u2 = u + v;
      Int v2 = d * u + v;
      if (mpz_odd_p(u2.get_mpz_t())) u2 += n;
      if (mpz_odd_p(v2.get_mpz_t())) v2 += n;
      u = (u2 / 2) % n;
      v = (v2 / 2) % n;
      qk = (qk * q) % n;
    }
  }
  u %= n; if (u < 0) u += n;
  v %= n; if (v < 0) v += n;
  if (u == 0 || v == 0) return true;
  for (unsigned long r = 1; r < s; ++r) {
    v = (v * v - 2 * qk) % n;
    if (v < 0) v += n;
    if (v == 0) return true;
    qk = (qk * qk) % n;
  }
  return false;
}

}  // namespace

bool is_prime(const Int& n_in) {
  Int n = abs(n_in);
  if (n < 2) return false;
  static const unsigned long tiny[] = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                       29, 31, 37, 41, 43, 47, 53, 59, 61};
  for (unsigned long p : tiny) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Int m = n - 1;
  unsigned long s = mpz_scan1(m.get_mpz_t(), 0);
  Int d = m >> s;
  // Deterministic below 3.3e24 with the first 13 prime bases.
  static const Int det_bound("3317044064679887385961981");
  static const unsigned long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  if (n < det_bound) {
    for (unsigned long a : bases)
      if (!miller_rabin_witness_ok(n, d, s, Int(a))) return false;
    return true;
  }
  // Baillie-PSW: strong base-2 test plus a strong Lucas test.
  if (!miller_rabin_witness_ok(n, d, s, Int(2))) return false;
  return strong_lucas_ok(n);
}

// ---------------------------------------------------------------------------
// Factoring

namespace {

void add_factor(std::map<Int, long>& out, const Int& p, long e) {
  out[p] += e;
}

// Trial division for word-sized inputs, avoiding mpz churn in the hot band.
void factor_small(std::uint64_t n, std::map<Int, long>& out) {
  for (unsigned long p : small_primes()) {
    std::uint64_t pp = p;
    if (pp * pp > n) break;
    if (n % pp == 0) {
      long e = 0;
      while (n % pp == 0) { n /= pp; ++e; }
      add_factor(out, Int(p), e);
    }
    if (n == 1) return;
  }
  if (n > 1) add_factor(out, Int(mpz_class(static_cast<unsigned long>(n))), 1);
}

struct Rng {
  std::uint64_t state;
  explicit Rng(unsigned long seed) : state(seed * 2862933555777941757ull + 3037000493ull) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
};

// Pollard p-1, stage 1 only. Cheap sweep that picks up factors p with
// p-1 smooth up to the bound; returns a proper factor or 0.
Int pollard_pm1(const Int& n, unsigned long bound) {
  Int a(2);
  for (unsigned long p : small_primes()) {
    if (p > bound) break;
    unsigned long pe = p;
    while (pe <= bound / p) pe *= p;
    mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), pe, n.get_mpz_t());
    if (a == 0) return 0;
  }
  Int g = gcd(a - 1, n);
  if (g > 1 && g < n) return g;
  return 0;
}

// Brent's variant of Pollard rho with batched gcds. Returns a proper factor
// or 0 once the iteration budget is spent.
Int pollard_rho_brent(const Int& n, unsigned long long budget, Rng& rng) {
  if (mpz_even_p(n.get_mpz_t())) return Int(2);
  const unsigned long batch = 128;
  for (int attempt = 0; attempt < 24; ++attempt) {
    Int c(static_cast<unsigned long>(rng.next() % 1024 + 1));
    Int y(static_cast<unsigned long>(rng.next() % 1024 + 2));
    Int x, ys, q(1), g(1);
    unsigned long long r = 1, spent = 0;
    while (g == 1) {
      x = y;
      for (unsigned long long i = 0; i < r; ++i) y = (y * y + c) % n;
      spent += r;
      unsigned long long k = 0;
      while (k < r && g == 1) {
        ys = y;
        unsigned long long lim = std::min<unsigned long long>(batch, r - k);
        for (unsigned long long i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = (q * abs(x - y)) % n;
        }
        g = gcd(q, n);
        k += lim;
        spent += lim;
      }
      r *= 2;
      if (spent > budget) break;
    }
    if (g == n) {
      // Backtrack one step at a time from the saved point.
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        g = gcd(abs(x - ys), n);
      }
    }
    if (g > 1 && g < n) return g;
    if (spent > budget) return 0;
  }
  return 0;
}

void factor_into(const Int& n_in, std::map<Int, long>& out, const FactorOptions& opts,
                 Rng& rng) {
  std::vector<Int> stack{n_in};
  while (!stack.empty()) {
    Int n = stack.back();
    stack.pop_back();
    if (n == 1) continue;
    if (n.fits_ulong_p() && n.get_ui() < (1ull << 62)) {
      factor_small(n.get_ui(), out);
      continue;
    }
    // Trial division.
    bool reduced = false;
    for (unsigned long p : small_primes()) {
      if (p > opts.trial_limit) break;
      Int pp(p);
      if (pp * pp > n) break;
      if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        long e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
          mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
          ++e;
        }
        add_factor(out, pp, e);
        reduced = true;
      }
    }
    if (n == 1) continue;
    if (reduced) {
      stack.push_back(n);
      continue;
    }
    if (is_prime(n)) {
      add_factor(out, n, 1);
      continue;
    }
    if (mpz_perfect_power_p(n.get_mpz_t())) {
      // n = r^k: recurse on the root and scale exponents afterwards via stack.
      for (unsigned long k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
        Int r;
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) {
          std::map<Int, long> sub;
          factor_into(r, sub, opts, rng);
          for (const auto& [p, e] : sub) add_factor(out, p, e * static_cast<long>(k));
          n = 1;
          break;
        }
      }
      if (n == 1) continue;
    }
    Int g = pollard_pm1(n, opts.pm1_bound);
    if (g == 0) g = pollard_rho_brent(n, opts.rho_budget, rng);
    if (g == 0) {
      throw FactorError("factoring effort exhausted on composite cofactor of " +
                            std::to_string(mpz_sizeinbase(n.get_mpz_t(), 2)) + " bits",
                        n, out);
    }
    stack.push_back(g);
    stack.push_back(n / g);
  }
}

}  // namespace

FactoredRational factor(const Int& n, const FactorOptions& opts) {
  if (n == 0) throw InputError("factor: zero input");
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > opts.max_bits)
    throw FactorError("factor: input exceeds configured bit bound", abs(n), {});
  FactoredRational r;
  r.sign = sgn(n) < 0 ? -1 : 1;
  Rng rng(opts.seed);
  factor_into(abs(n), r.exponents, opts, rng);
  return r;
}

FactoredRational factor_rational(const Rat& q, const FactorOptions& opts) {
  if (q == 0) throw InputError("factor_rational: zero input");
  FactoredRational num = factor(Int(q.get_num()), opts);
  FactoredRational den = factor(Int(q.get_den()), opts);
  return num / den;
}

long valuation(const FactoredRational& q, const Int& p) {
  auto it = q.exponents.find(p);
  return it == q.exponents.end() ? 0 : it->second;
}

bool is_s_integer(const FactoredRational& q, const PrimeSet& s) {
  for (const auto& [p, e] : q.exponents)
    if (e < 0 && !s.contains(p)) return false;
  return true;
}

bool is_s_unit(const FactoredRational& q, const PrimeSet& s) {
  for (const auto& [p, e] : q.exponents)
    if (e != 0 && !s.contains(p)) return false;
  return true;
}

bool s_divides(const FactoredRational& a, const FactoredRational& b, const PrimeSet& s) {
  if (!is_s_integer(a, s) || !is_s_integer(b, s))
    throw InputError("s_divides: arguments must be S-integers");
  for (const auto& [p, e] : a.exponents) {
    if (e <= 0 || s.contains(p)) continue;
    if (valuation(b, p) < e) return false;
  }
  return true;
}

std::vector<Int> s_support(const FactoredRational& q, const PrimeSet& s) {
  if (!is_s_integer(q, s)) throw InputError("s_support: argument must be an S-integer");
  std::vector<Int> out;
  for (const auto& [p, e] : q.exponents)
    if (e >= 1 && !s.contains(p)) out.push_back(p);
  return out;
}

}  // namespace torusdiv
