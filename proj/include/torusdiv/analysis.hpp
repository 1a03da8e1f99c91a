#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "torusdiv/factor.hpp"
#include "torusdiv/laurent.hpp"
#include "torusdiv/multgroup.hpp"
#include "torusdiv/powersum.hpp"

namespace torusdiv {

/// Input record: the set S, two torus points with nonzero rational
/// coordinates, and the divisor equations (with optional irreducible
/// components; irreducibility of supplied components is a trusted assertion).
struct ProblemInstance {
  PrimeSet s;
  std::vector<Rat> g1, g2;
  LaurentPoly f1{1}, f2{1};
  std::optional<std::vector<LaurentPoly>> components1, components2;

  long d1() const { return static_cast<long>(g1.size()); }
  long d2() const { return static_cast<long>(g2.size()); }

  /// Shape and consistency checks (nonzero coordinates, matching dimensions,
  /// component products matching the equations up to a monomial factor,
  /// pairwise non-associate components). Throws InputError.
  void validate() const;
};

struct ExtendResult {
  ProblemInstance instance;
  std::vector<Int> added_primes;
};

/// Minimal enlargement of S making every coordinate of g1, g2 an S-unit.
ExtendResult extend_s(const ProblemInstance& in);

struct ScanFailure {
  long n;
  std::string reason;
};

struct ScanResult {
  long n_max = 0;
  std::vector<long> hits;       // ascending
  std::vector<ScanFailure> failures;

  bool hit(long n) const;
  bool hit_all() const { return static_cast<long>(hits.size()) == n_max; }
  double hit_ratio() const { return n_max == 0 ? 0.0 : double(hits.size()) / double(n_max); }
};

/// n in [1, n_max] with (F1(g1^n)) containing (F2(g2^n)) as fractional ideals
/// of O_S, i.e. F1(g1^n) divides F2(g2^n). Exact; no factorization involved.
/// Zero handling: F2 value 0 is a hit, F1 value 0 with F2 value nonzero a miss.
ScanResult scan_ideal_inclusion(const ProblemInstance& in, long n_max);

/// n in [1, n_max] with Supp (g1^n)*I(D1) contained in Supp (g2^n)*I(D2).
/// Needs full factorization of the F1 value; failures are reported per n.
ScanResult scan_support_inclusion(const ProblemInstance& in, long n_max,
                                  const FactorOptions& fopts = {});

struct TorsionReduction {
  int k = 1;  // order of the torsion subgroup of <coords(g1), coords(g2)>
  std::vector<ProblemInstance> residues;  // index r: g -> g^k, F -> F(g^r X)
};

TorsionReduction torsion_reduce(const ProblemInstance& in);

struct ComponentCheck {
  int side;           // 1 or 2
  std::size_t index;  // position in the component list
  StabilizerInfo stab;
};

struct HypothesisReport {
  bool pass = false;
  std::vector<ComponentCheck> components;  // all must have dimension 0
  StabilizerInfo divisor2_stabilizer;      // must be trivial
  std::vector<std::string> problems;
};

/// Checks the finite-stabilizer condition for every component and the
/// triviality of the stabilizer of the second divisor.
HypothesisReport hypothesis_check(const ProblemInstance& in);

enum class DiagnosticCode {
  INPUT,
  HYPOTHESIS,
  EVIDENCE,
  TORSION,
  NO_SYMBOLIC_QUOTIENT,
  RANK_DEFECT,
  NOT_UNIMODULAR,
  INDEX_INFINITE,
  SOLVE_FAIL,
  MEMBERSHIP_FAIL,
  LAURENT_CHECK,
  VERIFY_FAIL,
};

const char* to_string(DiagnosticCode code);

struct Diagnostic {
  DiagnosticCode code;
  std::string detail;
};

struct CheckLine {
  std::string name;
  bool pass;
};

struct Transcript {
  std::vector<CheckLine> checks;

  void record(const std::string& name, bool pass) { checks.push_back({name, pass}); }
  bool all_pass() const;
};

/// Witness for an etale morphism phi with phi(g1^h) = g2^h and the divisor
/// pull-back relation; quotient witnesses F1 | F2 o phi on the residue-r
/// transformed equations.
struct MorphismCertificate {
  TorusMorphism map;  // d2 x d1 exponent matrix
  long h = 1;
  LaurentPoly quotient{1};
  long residue = 0;
  int torsion_order = 1;
  bool etale = false;
  Transcript transcript;
};

struct CertifyOptions {
  long evidence_n_max = 60;
  double evidence_threshold = 0.8;
  FactorOptions factor;
};

using MorphismOutcome = std::variant<MorphismCertificate, Diagnostic>;

MorphismOutcome certify_morphism(const ProblemInstance& in, const CertifyOptions& opts = {});

/// Witness for a common quotient torus G0 with maps phi: G1 -> G0,
/// psi: G2 -> G0, a divisor E = {f0 = 0} on G0, and phi(g1^h) = psi(g2^h),
/// with D1 inside phi*E and psi*E inside D2. The three conclusion conditions
/// are re-verified and reported individually.
struct CommonTorusCertificate {
  long r0 = 0;
  TorusMorphism phi;  // r0 x d1
  TorusMorphism psi;  // r0 x d2
  LaurentPoly f0{1};
  long h = 1;
  Int q_lcm = 1;
  long residue = 0;
  Transcript transcript;
};

using CommonTorusOutcome = std::variant<CommonTorusCertificate, Diagnostic>;

CommonTorusOutcome certify_common_torus(const ProblemInstance& in,
                                        const CertifyOptions& opts = {});

/// Witness that g2^h is hit by a dominant monomial map applied to g1,
/// concluded from support-inclusion evidence.
struct DominantMapCertificate {
  long h = 1;
  TorusMorphism map;  // d2 x d1
  Transcript transcript;
};

struct DominantMapOptions {
  long n_max = 50;
  long n_min = 1;
  long unity_order_bound = 6;
  FactorOptions factor;
};

using DominantMapOutcome = std::variant<DominantMapCertificate, Diagnostic>;

DominantMapOutcome certify_dominant_map(const ProblemInstance& in,
                                        const DominantMapOptions& opts = {});

struct ErdosReport {
  long x = 0, y = 0;
  long n_max = 0;
  /// Largest n with every m <= n support-verified from complete
  /// factorizations of both x^m - 1 and y^m - 1.
  long verified_up_to = 0;
  std::optional<long> violation_n;
  std::optional<Int> witness_prime;
  std::vector<ScanFailure> failures;
  std::optional<long> power_k;  // y = x^k when inclusion holds

  bool inclusion_holds() const { return !violation_n.has_value(); }
};

/// The support-inclusion question for the pair (x^n - 1), (y^n - 1) over all
/// rational primes, with the power conclusion when no violation appears.
ErdosReport erdos(long x, long y, long n_max, const FactorOptions& fopts = {});

/// A point whose j-th coordinate is the exponents[j]-th power of a fixed
/// primitive root of unity of the stated order.
struct UnityPoint {
  std::vector<long> exponents;
};

struct UnityScanResult {
  long order = 1;
  std::vector<UnityPoint> points;
  bool family = false;  // divisor contains a coordinate circle through a point
};

/// All points on f = 0 whose coordinates are roots of unity of order dividing
/// `order`, decided exactly in Q[x]/Phi_order. Orders above the configured
/// cyclotomic bound (12) are rejected.
UnityScanResult unity_points_scan(const LaurentPoly& f, long order);

/// Fully factored value of g^n - 1 for nonzero rational g != +-1, computed
/// through the cyclotomic product over divisors of n with a process-wide
/// memo table. Throws FactorError like factor().
FactoredRational factor_power_value(const Rat& g, long n, const FactorOptions& fopts = {});

/// Worker count for scans: TORUSDIV_THREADS when set, else 1.
unsigned scan_threads();

}  // namespace torusdiv
