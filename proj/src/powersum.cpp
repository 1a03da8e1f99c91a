#include "torusdiv/powersum.hpp"

#include <algorithm>
#include <map>

namespace torusdiv {

PowerSum PowerSum::of(const std::vector<PowerSumTerm>& terms) {
  std::map<Rat, Rat> merged;
  for (const auto& t : terms) {
    if (t.root == 0) throw InputError("PowerSum: zero root");
    merged[t.root] += t.coeff;
  }
  PowerSum f;
  for (const auto& [root, coeff] : merged)
    if (coeff != 0) f.terms_.push_back({coeff, root});
  return f;
}

std::vector<Rat> PowerSum::roots() const {
  std::vector<Rat> r;
  r.reserve(terms_.size());
  for (const auto& t : terms_) r.push_back(t.root);
  return r;
}

Rat PowerSum::eval(long n) const {
  Rat total(0);
  for (const auto& t : terms_) total += t.coeff * rat_pow(t.root, n);
  return total;
}

PowerSum operator*(const PowerSum& a, const PowerSum& b) {
  std::vector<PowerSumTerm> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) terms.push_back({s.coeff * t.coeff, s.root * t.root});
  return PowerSum::of(terms);
}

PowerSum operator+(const PowerSum& a, const PowerSum& b) {
  std::vector<PowerSumTerm> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return PowerSum::of(terms);
}

PowerSum power_sum_of(const LaurentPoly& f, const std::vector<Rat>& g) {
  if (static_cast<long>(g.size()) != f.dim())
    throw InputError("power_sum_of: point dimension mismatch");
  std::vector<PowerSumTerm> terms;
  for (const auto& [u, c] : f.terms()) {
    Rat root(1);
    for (std::size_t j = 0; j < g.size(); ++j)
      if (u[j] != 0) root *= rat_pow(g[j], u[j]);
    terms.push_back({c, root});
  }
  return PowerSum::of(terms);
}

LaurentPoly to_laurent(const PowerSum& f, const GroupBasis& b) {
  LaurentPoly out(b.rank());
  for (const auto& t : f.terms()) {
    auto expr = express(factor_rational(t.root), b);
    if (!expr || expr->negated)
      throw TorsionObstruction("to_laurent: root " + format_rational(t.root) +
                               " is not in the torsion-free span of the basis");
    Exponents u(b.rank());
    for (long j = 0; j < b.rank(); ++j) {
      if (!expr->exponents[j].fits_slong_p()) throw InputError("to_laurent: exponent overflow");
      u[j] = expr->exponents[j].get_si();
    }
    out.add_term(u, t.coeff);
  }
  return out;
}

PowerSum from_laurent(const LaurentPoly& f, const GroupBasis& b) {
  if (f.dim() != b.rank()) throw InputError("from_laurent: dimension mismatch");
  std::vector<Rat> point;
  point.reserve(b.basis.size());
  for (const auto& u : b.basis) point.push_back(u.value());
  return power_sum_of(f, point);
}

PowerSum subsample(const PowerSum& f, long q, long r) {
  if (q < 1) throw InputError("subsample: q must be >= 1");
  std::vector<PowerSumTerm> terms;
  terms.reserve(f.terms().size());
  for (const auto& t : f.terms())
    terms.push_back({t.coeff * rat_pow(t.root, r), rat_pow(t.root, q)});
  return PowerSum::of(terms);
}

std::optional<PowerSum> divide(const PowerSum& f2, const PowerSum& f1) {
  if (f1.is_zero()) throw InputError("divide: zero divisor power sum");
  if (f2.is_zero()) return PowerSum();
  std::vector<FactoredRational> gens;
  for (const auto& t : f1.terms()) gens.push_back(factor_rational(t.root));
  for (const auto& t : f2.terms()) gens.push_back(factor_rational(t.root));
  GroupBasis b = group_basis(gens);
  if (b.torsion_order != 1)
    throw TorsionObstruction(
        "divide: the combined root group has torsion; subsample along arithmetic "
        "progressions first");
  auto q = exact_divide(to_laurent(f2, b), to_laurent(f1, b));
  if (!q) return std::nullopt;
  return from_laurent(*q, b);
}

bool is_reduced(const PowerSum& f) {
  for (const auto& t : f.terms())
    if (t.root == 1) return true;
  return false;
}

GroupBasis roots_group(const PowerSum& f) {
  if (f.is_zero()) throw InputError("roots_group: zero power sum");
  std::vector<FactoredRational> gens;
  for (const auto& t : f.terms()) gens.push_back(factor_rational(t.root));
  return group_basis(gens);
}

}  // namespace torusdiv
