#include "torusdiv/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace torusdiv {

// ---------------------------------------------------------------------------
// Instance basics

namespace {

bool is_single_term(const LaurentPoly& f) { return f.term_count() == 1; }

void check_components(const LaurentPoly& f, const std::vector<LaurentPoly>& comps,
                      const char* label) {
  if (comps.empty()) throw InputError(std::string(label) + ": empty component list");
  LaurentPoly prod = LaurentPoly::constant(f.dim(), Rat(1));
  for (const auto& c : comps) {
    if (c.dim() != f.dim()) throw InputError(std::string(label) + ": component dim mismatch");
    if (c.is_zero()) throw InputError(std::string(label) + ": zero component");
    prod = prod * c;
  }
  auto q = exact_divide(f, prod);
  if (!q || !is_single_term(*q))
    throw InputError(std::string(label) +
                     ": component product does not match the equation up to a monomial");
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      auto r = exact_divide(comps[i], comps[j]);
      if (r && is_single_term(*r))
        throw InputError(std::string(label) + ": components " + std::to_string(i) + " and " +
                         std::to_string(j) + " are associate");
    }
}

std::vector<FactoredRational> factor_point(const std::vector<Rat>& g,
                                           const FactorOptions& fopts = {}) {
  std::vector<FactoredRational> out;
  out.reserve(g.size());
  for (const Rat& c : g) out.push_back(factor_rational(c, fopts));
  return out;
}

}  // namespace

void ProblemInstance::validate() const {
  if (g1.empty() || g2.empty()) throw InputError("instance: empty point");
  for (const Rat& c : g1)
    if (c == 0) throw InputError("instance: zero coordinate in g1");
  for (const Rat& c : g2)
    if (c == 0) throw InputError("instance: zero coordinate in g2");
  if (f1.dim() != d1()) throw InputError("instance: F1 dimension != dim of g1");
  if (f2.dim() != d2()) throw InputError("instance: F2 dimension != dim of g2");
  if (f1.is_zero() || f2.is_zero()) throw InputError("instance: zero divisor equation");
  if (components1) check_components(f1, *components1, "components1");
  if (components2) check_components(f2, *components2, "components2");
}

ExtendResult extend_s(const ProblemInstance& in) {
  in.validate();
  ExtendResult out{in, {}};
  auto absorb = [&](const Rat& c) {
    FactoredRational f = factor_rational(c);
    for (const auto& [p, e] : f.exponents) {
      if (!out.instance.s.contains(p)) {
        out.instance.s.insert(p);
        out.added_primes.push_back(p);
      }
    }
  };
  for (const Rat& c : in.g1) absorb(c);
  for (const Rat& c : in.g2) absorb(c);
  std::sort(out.added_primes.begin(), out.added_primes.end());
  return out;
}

// ---------------------------------------------------------------------------
// Scans

unsigned scan_threads() {
  if (const char* env = std::getenv("TORUSDIV_THREADS")) {
    long v = std::atol(env);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return 1;
}

namespace {

struct SlotOutcome {
  bool hit = false;
  std::string failure;  // nonempty on per-n failure
};

template <typename Fn>
ScanResult run_scan(long n_max, Fn&& per_n) {
  if (n_max < 1) throw InputError("scan: n_max must be >= 1");
  std::vector<SlotOutcome> slots(n_max + 1);
  unsigned workers = scan_threads();
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&](long n) {
    try {
      slots[n].hit = per_n(n);
    } catch (const FactorError& e) {
      slots[n].failure = e.what();
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (long n = 1; n <= n_max && !first_error; ++n) body(n);
  } else {
    std::atomic<long> next{1};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          long n = next.fetch_add(1);
          if (n > n_max) break;
          body(n);
        }
      });
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  ScanResult out;
  out.n_max = n_max;
  for (long n = 1; n <= n_max; ++n) {
    if (!slots[n].failure.empty())
      out.failures.push_back({n, slots[n].failure});
    else if (slots[n].hit)
      out.hits.push_back(n);
  }
  return out;
}

// true iff q is an S-integer, decided from the reduced denominator.
bool rational_is_s_integer(const Rat& q, const PrimeSet& s) {
  Int den = q.get_den();
  for (const Int& p : s.primes()) {
    Int tmp;
    mpz_remove(tmp.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    den = tmp;
  }
  return den == 1;
}

// Numerator of an S-integer with all S-primes and the sign stripped.
Int s_free_numerator(const Rat& q, const PrimeSet& s) {
  Int num = abs(Int(q.get_num()));
  for (const Int& p : s.primes()) {
    Int tmp;
    mpz_remove(tmp.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    num = tmp;
  }
  return num;
}

bool is_unit_binomial(const LaurentPoly& f) {
  if (f.dim() != 1 || f.term_count() != 2) return false;
  return f.coefficient({1}) == 1 && f.coefficient({0}) == -1;
}

}  // namespace

bool ScanResult::hit(long n) const {
  return std::binary_search(hits.begin(), hits.end(), n);
}

ScanResult scan_ideal_inclusion(const ProblemInstance& in, long n_max) {
  in.validate();
  return run_scan(n_max, [&](long n) {
    Rat v2 = evaluate(in.f2, point_pow(in.g2, n));
    if (v2 == 0) return true;  // the zero ideal lies in every ideal
    Rat v1 = evaluate(in.f1, point_pow(in.g1, n));
    if (v1 == 0) return false;
    return rational_is_s_integer(v2 / v1, in.s);
  });
}

ScanResult scan_support_inclusion(const ProblemInstance& in, long n_max,
                                  const FactorOptions& fopts) {
  in.validate();
  bool cyclo1 = is_unit_binomial(in.f1) && abs(in.g1[0]) != 1;
  return run_scan(n_max, [&](long n) {
    Rat v2 = evaluate(in.f2, point_pow(in.g2, n));
    if (v2 == 0) return true;
    Rat v1 = evaluate(in.f1, point_pow(in.g1, n));
    if (v1 == 0) return false;
    if (!rational_is_s_integer(v1, in.s) || !rational_is_s_integer(v2, in.s))
      throw InputError("scan_support_inclusion: value is not an S-integer at n = " +
                       std::to_string(n));
    std::vector<Int> supp;
    if (cyclo1) {
      supp = s_support(factor_power_value(in.g1[0], n, fopts), in.s);
    } else {
      Int w = s_free_numerator(v1, in.s);
      if (w != 1) {
        FactoredRational f = factor(w, fopts);
        for (const auto& [p, e] : f.exponents) supp.push_back(p);
      }
    }
    Int num2(v2.get_num());
    for (const Int& p : supp)
      if (!mpz_divisible_p(num2.get_mpz_t(), p.get_mpz_t())) return false;
    return true;
  });
}

// ---------------------------------------------------------------------------
// Cyclotomic-aware factorization of g^n - 1

namespace {

int mobius(long n) {
  int mu = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::vector<long> divisors(long n) {
  std::vector<long> ds;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    ds.push_back(d);
    if (d != n / d) ds.push_back(n / d);
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

// Homogeneous cyclotomic value: prod over primitive d-th roots zeta of
// (a - zeta b); equals b^phi(d) * Phi_d(a/b). Computed by the Moebius product.
Int cyclo_homogeneous(long d, const Int& a, const Int& b) {
  Int num(1), den(1);
  for (long e : divisors(d)) {
    int mu = mobius(d / e);
    if (mu == 0) continue;
    Int t = int_pow(a, e) - int_pow(b, e);
    (mu == 1 ? num : den) *= t;
  }
  return num / den;  // exact
}

struct CycloEntry {
  bool ok = false;
  FactoredRational value;
  std::string error;
  Int cofactor;
  std::map<Int, long> partial;
};

FactoredRational phi_factor(long d, const Int& a, const Int& b, const FactorOptions& fopts) {
  static std::map<std::string, CycloEntry> cache;
  static std::mutex mu;
  std::string key = a.get_str() + "|" + b.get_str() + "|" + std::to_string(d);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) {
      if (it->second.ok) return it->second.value;
      throw FactorError(it->second.error, it->second.cofactor, it->second.partial);
    }
  }
  CycloEntry entry;
  try {
    Int v = cyclo_homogeneous(d, a, b);
    if (a == 2 && b == 1 && d % 8 == 4 && d > 4) {
      // 2^(2m)+1 with odd m splits as (2^m - 2^h + 1)(2^m + 2^h + 1),
      // h = (m+1)/2; the two halves are coprime, so the d-th cyclotomic part
      // splits along the same line.
      long m = d / 4, h = (m + 1) / 2;
      Int low = int_pow(Int(2), m) - int_pow(Int(2), h) + 1;
      Int high = int_pow(Int(2), m) + int_pow(Int(2), h) + 1;
      Int gl = gcd(v, low), gh = gcd(v, high);
      if (gl * gh == abs(v) && gl > 1 && gh > 1) {
        FactoredRational f = factor(gl, fopts) * factor(gh, fopts);
        if (v < 0) f.sign = -f.sign;
        entry.ok = true;
        entry.value = f;
      }
    }
    if (!entry.ok) {
      entry.value = factor(v, fopts);
      entry.ok = true;
    }
  } catch (const FactorError& e) {
    entry.error = std::string("Phi_") + std::to_string(d) + "(" + a.get_str() +
                  (b == 1 ? "" : "/" + b.get_str()) + "): " + e.what();
    entry.cofactor = e.cofactor;
    entry.partial = e.partial;
  }
  {
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, entry);
  }
  if (!entry.ok) throw FactorError(entry.error, entry.cofactor, entry.partial);
  return entry.value;
}

}  // namespace

FactoredRational factor_power_value(const Rat& g, long n, const FactorOptions& fopts) {
  if (n < 1) throw InputError("factor_power_value: n must be >= 1");
  if (g == 0 || g == 1 || g == -1)
    throw InputError("factor_power_value: base must be a rational other than 0, 1, -1");
  FactoredRational gf = factor_rational(g, fopts);
  // Radical reduction g = g0^e maximizes sharing across scans.
  Int e(0);
  for (const auto& [p, k] : gf.exponents) e = gcd(e, Int(k < 0 ? -k : k));
  long ee = e.get_si();
  if (gf.sign < 0)
    while (ee % 2 == 0) ee /= 2;
  FactoredRational g0f;
  g0f.sign = gf.sign;
  for (const auto& [p, k] : gf.exponents) g0f.exponents[p] = k / ee;
  Rat g0 = g0f.value();
  long m = n * ee;
  Int a(g0.get_num()), b(g0.get_den());
  FactoredRational result;
  for (long d : divisors(m)) result = result * phi_factor(d, a, b, fopts);
  if (b != 1) {
    FactoredRational bf = factor(b, fopts);
    result = result / bf.pow(m);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Torsion reduction and hypotheses

TorsionReduction torsion_reduce(const ProblemInstance& in) {
  in.validate();
  std::vector<FactoredRational> coords = factor_point(in.g1);
  for (const auto& f : factor_point(in.g2)) coords.push_back(f);
  TorsionReduction out;
  out.k = group_basis(coords).torsion_order;
  for (int r = 0; r < out.k; ++r) {
    ProblemInstance res = in;
    res.g1 = point_pow(in.g1, out.k);
    res.g2 = point_pow(in.g2, out.k);
    res.f1 = translate_by_point(in.f1, point_pow(in.g1, r));
    res.f2 = translate_by_point(in.f2, point_pow(in.g2, r));
    if (in.components1) {
      std::vector<LaurentPoly> cs;
      for (const auto& c : *in.components1) cs.push_back(translate_by_point(c, point_pow(in.g1, r)));
      res.components1 = std::move(cs);
    }
    if (in.components2) {
      std::vector<LaurentPoly> cs;
      for (const auto& c : *in.components2) cs.push_back(translate_by_point(c, point_pow(in.g2, r)));
      res.components2 = std::move(cs);
    }
    out.residues.push_back(std::move(res));
  }
  return out;
}

HypothesisReport hypothesis_check(const ProblemInstance& in) {
  in.validate();
  HypothesisReport rep;
  auto check_side = [&](int side, const LaurentPoly& f,
                        const std::optional<std::vector<LaurentPoly>>& comps) {
    std::vector<LaurentPoly> list = comps ? *comps : std::vector<LaurentPoly>{f};
    for (std::size_t i = 0; i < list.size(); ++i) {
      StabilizerInfo st = stabilizer(list[i]);
      rep.components.push_back({side, i, st});
      if (st.dimension != 0)
        rep.problems.push_back("component " + std::to_string(i + 1) + " of F" +
                               std::to_string(side) + " has a stabilizer of dimension " +
                               std::to_string(st.dimension));
    }
  };
  check_side(1, in.f1, in.components1);
  check_side(2, in.f2, in.components2);
  rep.divisor2_stabilizer = stabilizer(in.f2);
  if (!rep.divisor2_stabilizer.trivial()) {
    std::string factors;
    for (const Int& d : rep.divisor2_stabilizer.invariant_factors)
      factors += (factors.empty() ? "" : ",") + d.get_str();
    rep.problems.push_back("Stab(D2) is nontrivial: dimension " +
                           std::to_string(rep.divisor2_stabilizer.dimension) + ", factors [" +
                           factors + "]");
  }
  rep.pass = rep.problems.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Diagnostics and transcripts

const char* to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::INPUT: return "INPUT";
    case DiagnosticCode::HYPOTHESIS: return "HYPOTHESIS";
    case DiagnosticCode::EVIDENCE: return "EVIDENCE";
    case DiagnosticCode::TORSION: return "TORSION";
    case DiagnosticCode::NO_SYMBOLIC_QUOTIENT: return "NO_SYMBOLIC_QUOTIENT";
    case DiagnosticCode::RANK_DEFECT: return "RANK_DEFECT";
    case DiagnosticCode::NOT_UNIMODULAR: return "NOT_UNIMODULAR";
    case DiagnosticCode::INDEX_INFINITE: return "INDEX_INFINITE";
    case DiagnosticCode::SOLVE_FAIL: return "SOLVE_FAIL";
    case DiagnosticCode::MEMBERSHIP_FAIL: return "MEMBERSHIP_FAIL";
    case DiagnosticCode::LAURENT_CHECK: return "LAURENT_CHECK";
    case DiagnosticCode::VERIFY_FAIL: return "VERIFY_FAIL";
  }
  return "UNKNOWN";
}

bool Transcript::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

// ---------------------------------------------------------------------------
// certify_morphism

namespace {

IntMatrix rows_from_expressions(const std::vector<std::vector<Int>>& rows, long cols) {
  IntMatrix m(static_cast<long>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (long j = 0; j < cols; ++j) m.at(static_cast<long>(i), j) = rows[i][j];
  return m;
}

// Exponent matrix of the coordinates of g over the basis of u (one row per
// coordinate); nullopt if some coordinate falls outside the group.
std::optional<IntMatrix> coords_over_basis(const std::vector<FactoredRational>& coords,
                                           const GroupBasis& u) {
  std::vector<std::vector<Int>> rows;
  for (const auto& c : coords) {
    auto e = express(c, u);
    if (!e || e->negated) return std::nullopt;
    rows.push_back(e->exponents);
  }
  return rows_from_expressions(rows, u.rank());
}

struct ResidueAttempt {
  int stage = 0;  // how far the pipeline got, for picking the best diagnostic
  std::optional<MorphismCertificate> cert;
  Diagnostic diag{DiagnosticCode::EVIDENCE, ""};
};

ResidueAttempt try_residue_morphism(const ProblemInstance& res, const ProblemInstance& orig,
                                    int k, int r, const CertifyOptions& opts) {
  ResidueAttempt out;
  auto fail = [&](int stage, DiagnosticCode code, const std::string& detail) {
    out.stage = stage;
    out.diag = {code, "residue " + std::to_string(r) + ": " + detail};
    return out;
  };

  ScanResult evidence = scan_ideal_inclusion(res, opts.evidence_n_max);
  if (evidence.hit_ratio() < opts.evidence_threshold)
    return fail(0, DiagnosticCode::EVIDENCE,
                "ideal-inclusion evidence " + std::to_string(evidence.hits.size()) + "/" +
                    std::to_string(opts.evidence_n_max) + " below threshold");

  std::vector<FactoredRational> coords1 = factor_point(res.g1);
  std::vector<FactoredRational> coords2 = factor_point(res.g2);
  std::vector<FactoredRational> all = coords1;
  all.insert(all.end(), coords2.begin(), coords2.end());
  GroupBasis u = group_basis(all);
  if (u.torsion_order != 1)
    return fail(1, DiagnosticCode::TORSION, "combined coordinate group still has torsion");

  PowerSum f1 = power_sum_of(res.f1, res.g1);
  PowerSum f2 = power_sum_of(res.f2, res.g2);
  if (f1.is_zero())
    return fail(1, DiagnosticCode::VERIFY_FAIL, "F1 vanishes identically along the orbit");

  std::optional<PowerSum> quotient_ps;
  try {
    quotient_ps = divide(f2, f1);
  } catch (const TorsionObstruction& e) {
    return fail(2, DiagnosticCode::TORSION, e.what());
  }
  if (!quotient_ps)
    return fail(2, DiagnosticCode::NO_SYMBOLIC_QUOTIENT,
                "numeric-only evidence, no certificate: the value quotient is not a power sum");

  long r0 = u.rank();
  long rank1 = roots_group(f1).rank();
  long rank2 = f2.is_zero() ? 0 : roots_group(f2).rank();
  if (res.d1() != r0 || res.d2() != r0 || rank1 != r0 || rank2 != r0)
    return fail(3, DiagnosticCode::RANK_DEFECT,
                "ranks (d1=" + std::to_string(res.d1()) + ", d2=" + std::to_string(res.d2()) +
                    ", roots(f1)=" + std::to_string(rank1) + ", roots(f2)=" +
                    std::to_string(rank2) + ") do not all equal rank(U)=" + std::to_string(r0));

  auto m1 = coords_over_basis(coords1, u);
  auto m2 = coords_over_basis(coords2, u);
  if (!m1 || !m2)
    return fail(3, DiagnosticCode::RANK_DEFECT, "coordinates not expressible over the basis");
  Int det1 = det(*m1);
  if (det1 != 1 && det1 != -1)
    return fail(4, DiagnosticCode::NOT_UNIMODULAR,
                "coordinate matrix of g1 has determinant " + det1.get_str());

  MorphismCertificate cert;
  cert.map.exponents = (*m2) * unimodular_inverse(*m1);
  cert.residue = r;
  cert.torsion_order = k;

  // Minimal h with phi(g1^h) = g2^h; the residue construction forces the
  // coordinate ratios to be k-th roots of unity, hence +-1 over Q.
  std::vector<Rat> image = cert.map.apply(orig.g1);
  bool all_one = true, all_pm_one = true;
  for (long i = 0; i < orig.d2(); ++i) {
    Rat w = image[i] / orig.g2[i];
    if (w != 1) all_one = false;
    if (w != 1 && w != -1) all_pm_one = false;
  }
  if (!all_pm_one)
    return fail(5, DiagnosticCode::VERIFY_FAIL, "coordinate ratio is not a root of unity");
  cert.h = all_one ? 1 : 2;

  auto quotient = exact_divide(cert.map.pullback(res.f2), res.f1);
  if (!quotient)
    return fail(5, DiagnosticCode::VERIFY_FAIL, "pulled-back equation is not divisible by F1");
  cert.quotient = *quotient;
  cert.etale = cert.map.is_isogeny();

  std::vector<Rat> lhs = cert.map.apply(point_pow(orig.g1, cert.h));
  std::vector<Rat> rhs = point_pow(orig.g2, cert.h);
  cert.transcript.record("phi(g1^h) == g2^h", lhs == rhs);
  cert.transcript.record("F2(phi(X)) == F1 * quotient",
                         cert.map.pullback(res.f2) == res.f1 * cert.quotient);
  cert.transcript.record("etale (square exponent matrix, nonzero determinant)", cert.etale);
  if (!cert.transcript.all_pass())
    return fail(6, DiagnosticCode::VERIFY_FAIL, "certificate re-verification failed");
  out.stage = 7;
  out.cert = std::move(cert);
  return out;
}

}  // namespace

MorphismOutcome certify_morphism(const ProblemInstance& in, const CertifyOptions& opts) {
  ProblemInstance inst = extend_s(in).instance;

  HypothesisReport hyp = hypothesis_check(inst);
  if (!hyp.pass) {
    std::string detail = "hypothesis check failed:";
    for (const auto& p : hyp.problems) detail += " " + p + ";";
    return Diagnostic{DiagnosticCode::HYPOTHESIS, detail};
  }
  if (!is_independent(factor_point(inst.g1)) || !is_independent(factor_point(inst.g2)))
    return Diagnostic{DiagnosticCode::RANK_DEFECT,
                      "coordinates of g1 or g2 are multiplicatively dependent (the point does "
                      "not generate a Zariski-dense subgroup)"};

  TorsionReduction tr = torsion_reduce(inst);
  ResidueAttempt best;
  best.stage = -1;
  for (int r = 0; r < tr.k; ++r) {
    ResidueAttempt attempt = try_residue_morphism(tr.residues[r], inst, tr.k, r, opts);
    if (attempt.cert) return std::move(*attempt.cert);
    if (attempt.stage > best.stage) best = std::move(attempt);
  }
  return best.diag;
}

// ---------------------------------------------------------------------------
// certify_common_torus

namespace {

GroupBasis basis_from_elements(const std::vector<FactoredRational>& elems) {
  GroupBasis b;
  b.basis = elems;
  b.torsion_order = 1;
  std::vector<Int> primes;
  for (const auto& e : elems)
    for (const auto& [p, k] : e.exponents) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  b.prime_index = std::move(primes);
  return b;
}

std::optional<IntMatrix> solve_map_onto(const std::vector<FactoredRational>& targets,
                                        const std::vector<FactoredRational>& coords) {
  std::vector<std::vector<Int>> rows;
  for (const auto& t : targets) {
    auto e = integer_exponents(t, coords);
    if (!e) return std::nullopt;
    rows.push_back(*e);
  }
  return rows_from_expressions(rows, static_cast<long>(coords.size()));
}

struct GeneAttempt {
  int stage = 0;
  std::optional<CommonTorusCertificate> cert;
  Diagnostic diag{DiagnosticCode::EVIDENCE, ""};
};

GeneAttempt try_residue_common_torus(const ProblemInstance& res, const ProblemInstance& orig,
                                     int k, int r, const CertifyOptions& opts) {
  GeneAttempt out;
  auto fail = [&](int stage, DiagnosticCode code, const std::string& detail) {
    out.stage = stage;
    out.diag = {code, "residue " + std::to_string(r) + ": " + detail};
    return out;
  };

  ScanResult evidence = scan_ideal_inclusion(res, opts.evidence_n_max);
  if (evidence.hit_ratio() < opts.evidence_threshold)
    return fail(0, DiagnosticCode::EVIDENCE,
                "ideal-inclusion evidence " + std::to_string(evidence.hits.size()) + "/" +
                    std::to_string(opts.evidence_n_max) + " below threshold");

  // Normalize F1 so the attached power sum is reduced (has the root 1).
  LaurentPoly f1_eq = res.f1;
  if (f1_eq.coefficient(Exponents(f1_eq.dim(), 0)) == 0)
    f1_eq = reduce_at(f1_eq, f1_eq.terms().begin()->first);
  PowerSum f1 = power_sum_of(f1_eq, res.g1);
  PowerSum f2 = power_sum_of(res.f2, res.g2);
  if (f1.is_zero() || !is_reduced(f1))
    return fail(1, DiagnosticCode::VERIFY_FAIL, "reduced representative of F1 unavailable");
  if (f2.is_zero())
    return fail(1, DiagnosticCode::VERIFY_FAIL, "F2 vanishes identically along the orbit");

  std::optional<PowerSum> quotient_ps;
  try {
    quotient_ps = divide(f2, f1);
  } catch (const TorsionObstruction& e) {
    return fail(2, DiagnosticCode::TORSION, e.what());
  }
  if (!quotient_ps)
    return fail(2, DiagnosticCode::NO_SYMBOLIC_QUOTIENT,
                "numeric-only evidence, no certificate: the value quotient is not a power sum");

  // q = lcm over roots of f1 of their power index in <roots of f2>.
  std::vector<FactoredRational> roots2;
  for (const Rat& root : f2.roots()) roots2.push_back(factor_rational(root));
  Int q(1);
  for (const Rat& root : f1.roots()) {
    auto idx = power_index(factor_rational(root), roots2);
    if (!idx)
      return fail(3, DiagnosticCode::INDEX_INFINITE,
                  "root " + format_rational(root) +
                      " has no finite power index in the root group of f2");
    q = lcm(q, *idx);
  }
  if (!q.fits_slong_p()) return fail(3, DiagnosticCode::INDEX_INFINITE, "power index overflow");
  long ql = q.get_si();

  GroupBasis gamma = roots_group(f1);
  long r0 = gamma.rank();
  std::vector<FactoredRational> delta;
  for (const auto& g : gamma.basis) delta.push_back(g.pow(ql));

  std::vector<FactoredRational> coords1 = factor_point(res.g1);
  std::vector<FactoredRational> coords2 = factor_point(res.g2);
  std::optional<IntMatrix> p, qm;
  long h_step = 0;
  for (long step = 1; step <= 4 && !p; ++step) {
    std::vector<FactoredRational> c1, c2;
    for (const auto& c : coords1) c1.push_back(c.pow(step));
    for (const auto& c : coords2) c2.push_back(c.pow(step));
    p = solve_map_onto(delta, c1);
    qm = solve_map_onto(delta, c2);
    if (!p || !qm) { p.reset(); qm.reset(); continue; }
    h_step = step;
  }
  if (!p || !qm)
    return fail(4, DiagnosticCode::SOLVE_FAIL,
                "no exponent h <= 4k with both point systems integrally solvable");

  CommonTorusCertificate cert;
  cert.r0 = r0;
  cert.phi.exponents = *p;
  cert.psi.exponents = *qm;
  cert.q_lcm = q;
  cert.residue = r;
  cert.h = static_cast<long>(k) * h_step;
  cert.f0 = to_laurent(subsample(f1, ql, 0), basis_from_elements(delta));

  std::vector<Rat> lhs = cert.phi.apply(point_pow(orig.g1, cert.h));
  std::vector<Rat> rhs = cert.psi.apply(point_pow(orig.g2, cert.h));
  cert.transcript.record("phi(g1^h) == psi(g2^h)", lhs == rhs);
  cert.transcript.record("F1 divides F0(phi(X))  [D1 inside phi*E]",
                         exact_divide(cert.phi.pullback(cert.f0), f1_eq).has_value());
  cert.transcript.record("F0(psi(X)) divides F2  [psi*E inside D2]",
                         exact_divide(res.f2, cert.psi.pullback(cert.f0)).has_value());
  out.stage = 5;
  out.cert = std::move(cert);
  return out;
}

}  // namespace

CommonTorusOutcome certify_common_torus(const ProblemInstance& in, const CertifyOptions& opts) {
  ProblemInstance inst = extend_s(in).instance;
  if (!is_independent(factor_point(inst.g1)) || !is_independent(factor_point(inst.g2)))
    return Diagnostic{DiagnosticCode::RANK_DEFECT,
                      "coordinates of g1 or g2 are multiplicatively dependent"};
  TorsionReduction tr = torsion_reduce(inst);
  GeneAttempt best;
  best.stage = -1;
  for (int r = 0; r < tr.k; ++r) {
    GeneAttempt attempt = try_residue_common_torus(tr.residues[r], inst, tr.k, r, opts);
    if (attempt.cert) return std::move(*attempt.cert);
    if (attempt.stage > best.stage) best = std::move(attempt);
  }
  return best.diag;
}

// ---------------------------------------------------------------------------
// certify_dominant_map

DominantMapOutcome certify_dominant_map(const ProblemInstance& in,
                                        const DominantMapOptions& opts) {
  ProblemInstance inst = extend_s(in).instance;
  std::vector<FactoredRational> coords1 = factor_point(inst.g1);
  std::vector<FactoredRational> coords2 = factor_point(inst.g2);
  if (!is_independent(coords1) || !is_independent(coords2))
    return Diagnostic{DiagnosticCode::HYPOTHESIS,
                      "coordinates of g1 or g2 are multiplicatively dependent"};
  if (evaluate(inst.f1, std::vector<Rat>(inst.d1(), Rat(1))) != 0)
    return Diagnostic{DiagnosticCode::HYPOTHESIS, "D1 does not contain the identity point"};

  // Partial check that D2 carries no translate of a positive-dimensional
  // subtorus: component stabilizers when supplied, and torsion points up to
  // the configured order otherwise.
  if (inst.components2) {
    for (std::size_t i = 0; i < inst.components2->size(); ++i) {
      StabilizerInfo st = stabilizer((*inst.components2)[i]);
      if (st.dimension != 0)
        return Diagnostic{DiagnosticCode::LAURENT_CHECK,
                          "component " + std::to_string(i + 1) +
                              " of F2 has a positive-dimensional stabilizer"};
    }
  }
  if (stabilizer(inst.f2).dimension != 0)
    return Diagnostic{DiagnosticCode::LAURENT_CHECK, "F2 has a positive-dimensional stabilizer"};
  UnityScanResult unity = unity_points_scan(inst.f2, opts.unity_order_bound);
  if (unity.family)
    return Diagnostic{DiagnosticCode::LAURENT_CHECK,
                      "D2 contains a coordinate circle of torsion points"};

  ScanResult scan = scan_support_inclusion(inst, opts.n_max, opts.factor);
  if (!scan.failures.empty())
    return Diagnostic{DiagnosticCode::EVIDENCE,
                      "factorization failure at n = " + std::to_string(scan.failures[0].n) +
                          ": " + scan.failures[0].reason};
  for (long n = opts.n_min; n <= opts.n_max; ++n)
    if (!scan.hit(n))
      return Diagnostic{DiagnosticCode::EVIDENCE,
                        "support inclusion fails at n = " + std::to_string(n)};

  Int h(1);
  for (std::size_t i = 0; i < coords2.size(); ++i) {
    auto idx = power_index(coords2[i], coords1);
    if (!idx)
      return Diagnostic{DiagnosticCode::MEMBERSHIP_FAIL,
                        "no power of coordinate " + std::to_string(i + 1) +
                            " of g2 lies in the group generated by the coordinates of g1; "
                            "the support evidence contradicts the expected conclusion"};
    h = lcm(h, *idx);
  }
  if (!h.fits_slong_p())
    return Diagnostic{DiagnosticCode::MEMBERSHIP_FAIL, "power exponent overflow"};

  DominantMapCertificate cert;
  cert.h = h.get_si();
  std::vector<FactoredRational> targets;
  for (const auto& c : coords2) targets.push_back(c.pow(cert.h));
  auto a = solve_map_onto(targets, coords1);
  if (!a)
    return Diagnostic{DiagnosticCode::SOLVE_FAIL, "exponent system unexpectedly unsolvable"};
  cert.map.exponents = *a;

  std::vector<Rat> lhs = cert.map.apply(inst.g1);
  std::vector<Rat> rhs = point_pow(inst.g2, cert.h);
  cert.transcript.record("phi(g1) == g2^h", lhs == rhs);
  cert.transcript.record("phi dominant (exponent matrix has full row rank)",
                         hnf(cert.map.exponents).rank == inst.d2());
  if (!cert.transcript.all_pass())
    return Diagnostic{DiagnosticCode::VERIFY_FAIL, "certificate re-verification failed"};
  return cert;
}

// ---------------------------------------------------------------------------
// Erdos support comparison

ErdosReport erdos(long x, long y, long n_max, const FactorOptions& fopts) {
  if (x < 2 || y < 2) throw InputError("erdos: x and y must be integers >= 2");
  ErdosReport rep;
  rep.x = x;
  rep.y = y;
  rep.n_max = n_max;

  struct Slot {
    bool complete = false;           // both sides fully factored
    std::optional<Int> witness;      // prime dividing x^n-1 but not y^n-1
    std::vector<ScanFailure> fails;
  };
  std::vector<Slot> slots(n_max + 1);

  auto body = [&](long n) {
    Slot& slot = slots[n];
    std::vector<Int> primes1;
    bool ok1 = false;
    try {
      FactoredRational v1 = factor_power_value(Rat(x), n, fopts);
      for (const auto& [p, e] : v1.exponents) primes1.push_back(p);
      ok1 = true;
    } catch (const FactorError& e) {
      slot.fails.push_back({n, std::string("x-side: ") + e.what()});
    }
    Int yv = int_pow(Int(y), n) - 1;
    if (ok1) {
      for (const Int& p : primes1) {
        if (!mpz_divisible_p(yv.get_mpz_t(), p.get_mpz_t())) {
          slot.witness = p;
          break;
        }
      }
    }
    bool ok2 = false;
    if (ok1 && !slot.witness) {
      try {
        factor_power_value(Rat(y), n, fopts);
        ok2 = true;
      } catch (const FactorError& e) {
        slot.fails.push_back({n, std::string("y-side: ") + e.what()});
      }
    }
    slot.complete = ok1 && ok2 && !slot.witness;
  };

  unsigned workers = scan_threads();
  if (workers <= 1) {
    for (long n = 1; n <= n_max; ++n) {
      body(n);
      if (slots[n].witness) break;  // first violation ends the scan
    }
  } else {
    std::atomic<long> next{1};
    std::atomic<long> stop_after{n_max};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          long n = next.fetch_add(1);
          if (n > stop_after.load()) break;
          body(n);
          if (slots[n].witness) {
            long cur = stop_after.load();
            while (n < cur && !stop_after.compare_exchange_weak(cur, n)) {}
          }
        }
      });
    for (auto& t : pool) t.join();
  }

  bool prefix = true;
  for (long n = 1; n <= n_max; ++n) {
    const Slot& slot = slots[n];
    if (slot.witness) {
      rep.violation_n = n;
      rep.witness_prime = slot.witness;
      break;
    }
    for (const auto& f : slot.fails) rep.failures.push_back(f);
    if (prefix && slot.complete)
      rep.verified_up_to = n;
    else
      prefix = false;
  }

  if (!rep.violation_n) {
    FactoredRational xf = factor(Int(x), fopts), yf = factor(Int(y), fopts);
    auto e = integer_exponents(yf, {xf});
    if (e && (*e)[0].fits_slong_p() && (*e)[0] >= 1) rep.power_k = (*e)[0].get_si();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Torsion points on a divisor

namespace {

// Integer coefficients of the m-th cyclotomic polynomial, ascending degree.
std::vector<Int> cyclotomic_poly(long m) {
  std::vector<Int> poly(m + 1, Int(0));
  poly[0] = -1;
  poly[m] = 1;  // x^m - 1
  for (long d : divisors(m)) {
    if (d == m) continue;
    std::vector<Int> phi_d = cyclotomic_poly(d);
    // Exact monic division poly /= phi_d.
    std::vector<Int> q(poly.size() - phi_d.size() + 1, Int(0));
    std::vector<Int> rem = poly;
    for (long i = static_cast<long>(q.size()) - 1; i >= 0; --i) {
      Int c = rem[i + phi_d.size() - 1];
      q[i] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j < phi_d.size(); ++j) rem[i + j] -= c * phi_d[j];
    }
    poly = std::move(q);
  }
  return poly;
}

// Reduces sum c_k x^k modulo the monic integer polynomial phi; true iff zero.
bool reduces_to_zero(std::vector<Rat> c, const std::vector<Int>& phi) {
  long deg = static_cast<long>(phi.size()) - 1;
  for (long i = static_cast<long>(c.size()) - 1; i >= deg; --i) {
    Rat lead = c[i];
    if (lead == 0) continue;
    for (long j = 0; j <= deg; ++j) c[i - deg + j] -= lead * Rat(phi[j]);
  }
  for (long i = 0; i < deg && i < static_cast<long>(c.size()); ++i)
    if (c[i] != 0) return false;
  return true;
}

}  // namespace

UnityScanResult unity_points_scan(const LaurentPoly& f, long order) {
  const long kMaxOrder = 12;
  if (order < 1) throw InputError("unity_points_scan: order must be >= 1");
  if (order > kMaxOrder)
    throw InputError("unity_points_scan: order exceeds the cyclotomic bound " +
                     std::to_string(kMaxOrder));
  if (f.is_zero()) throw InputError("unity_points_scan: zero polynomial");
  long d = f.dim();
  double combos = 1;
  for (long j = 0; j < d; ++j) combos *= double(order);
  if (combos > 2e6) throw InputError("unity_points_scan: too many candidate points");

  std::vector<Int> phi = cyclotomic_poly(order);
  UnityScanResult out;
  out.order = order;

  auto value_classes = [&](const std::vector<long>& a, long skip) {
    // Coefficients of F with variable `skip` left free, as a map
    // exponent-of-skip -> residue classes mod order. skip == -1 evaluates all.
    std::map<long, std::vector<Rat>> per_exp;
    for (const auto& [u, c] : f.terms()) {
      long cls = 0;
      for (long j = 0; j < d; ++j) {
        if (j == skip) continue;
        cls = (cls + (u[j] % order + order) * a[j]) % order;
      }
      long key = skip == -1 ? 0 : u[skip];
      auto& vec = per_exp[key];
      if (vec.empty()) vec.assign(order, Rat(0));
      vec[cls] += c;
    }
    return per_exp;
  };

  std::vector<long> a(d, 0);
  while (true) {
    auto classes = value_classes(a, -1);
    if (reduces_to_zero(classes[0], phi)) {
      out.points.push_back({a});
      if (!out.family) {
        for (long j = 0; j < d && !out.family; ++j) {
          auto sliced = value_classes(a, j);
          bool all_zero = true;
          for (const auto& [e, vec] : sliced)
            if (!reduces_to_zero(vec, phi)) { all_zero = false; break; }
          if (all_zero) out.family = true;  // the whole X_j circle lies on the divisor
        }
      }
    }
    long j = 0;
    for (; j < d; ++j) {
      if (++a[j] < order) break;
      a[j] = 0;
    }
    if (j == d) break;
  }
  return out;
}

}  // namespace torusdiv
