#include "torusdiv/jsonio.hpp"

namespace torusdiv {

namespace {

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Int(j.get<std::string>(), 10);
  throw InputError("expected an integer (number or decimal string)");
}

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("expected a rational as \"p/q\" string");
}

}  // namespace

Json to_json(const Int& v) { return v.get_str(); }
Json to_json(const Rat& v) { return format_rational(v); }

Json to_json(const PrimeSet& s) {
  Json arr = Json::array();
  for (const Int& p : s.primes()) {
    if (p.fits_slong_p())
      arr.push_back(p.get_si());
    else
      arr.push_back(p.get_str());
  }
  return arr;
}

PrimeSet prime_set_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("prime set must be an array");
  std::vector<Int> primes;
  for (const auto& e : j) primes.push_back(int_from_json(e));
  return PrimeSet(std::move(primes));
}

Json to_json(const FactoredRational& f) {
  Json factors = Json::array();
  for (const auto& [p, e] : f.exponents) factors.push_back(Json::array({to_json(p), e}));
  return Json{{"sign", f.sign}, {"factors", factors}, {"value", to_json(f.value())}};
}

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).get_str());
    rows.push_back(row);
  }
  return rows;
}

IntMatrix int_matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("matrix must be an array of row arrays");
  long rows = static_cast<long>(j.size());
  long cols = rows == 0 ? 0 : static_cast<long>(j[0].size());
  IntMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (static_cast<long>(j[i].size()) != cols) throw InputError("matrix rows are ragged");
    for (long c = 0; c < cols; ++c) m.at(i, c) = int_from_json(j[i][c]);
  }
  return m;
}

Json to_json(const GroupBasis& b) {
  Json basis = Json::array();
  for (const auto& g : b.basis) basis.push_back(format_rational(g.value()));
  return Json{{"basis", basis}, {"torsion_order", b.torsion_order}};
}

Json to_json(const LaurentPoly& f) {
  Json terms = Json::array();
  for (const auto& [u, c] : f.terms())
    terms.push_back(Json{{"exponents", u}, {"coeff", format_rational(c)}});
  return Json{{"dim", f.dim()}, {"terms", terms}, {"text", to_string(f)}};
}

LaurentPoly laurent_from_json(const Json& j, long dim) {
  if (j.is_string()) return parse_laurent(j.get<std::string>(), dim);
  const Json& terms = j.is_object() ? j.at("terms") : j;
  LaurentPoly f(dim);
  for (const auto& t : terms) {
    Exponents u = t.at("exponents").get<Exponents>();
    f.add_term(u, rat_from_json(t.at("coeff")));
  }
  return f;
}

Json to_json(const PowerSum& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms())
    terms.push_back(Json{{"coeff", format_rational(t.coeff)}, {"root", format_rational(t.root)}});
  return Json{{"terms", terms}};
}

PowerSum power_sum_from_json(const Json& j) {
  std::vector<PowerSumTerm> terms;
  for (const auto& t : j.at("terms"))
    terms.push_back({rat_from_json(t.at("coeff")), rat_from_json(t.at("root"))});
  return PowerSum::of(terms);
}

Json to_json(const ProblemInstance& in) {
  Json j{{"s_primes", to_json(in.s)},
         {"g1", Json::array()},
         {"g2", Json::array()},
         {"F1", to_string(in.f1)},
         {"F2", to_string(in.f2)}};
  for (const Rat& c : in.g1) j["g1"].push_back(format_rational(c));
  for (const Rat& c : in.g2) j["g2"].push_back(format_rational(c));
  if (in.components1) {
    j["components1"] = Json::array();
    for (const auto& c : *in.components1) j["components1"].push_back(to_string(c));
  }
  if (in.components2) {
    j["components2"] = Json::array();
    for (const auto& c : *in.components2) j["components2"].push_back(to_string(c));
  }
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  ProblemInstance in;
  if (j.contains("s_primes")) in.s = prime_set_from_json(j.at("s_primes"));
  for (const auto& c : j.at("g1")) in.g1.push_back(rat_from_json(c));
  for (const auto& c : j.at("g2")) in.g2.push_back(rat_from_json(c));
  in.f1 = laurent_from_json(j.at("F1"), in.d1());
  in.f2 = laurent_from_json(j.at("F2"), in.d2());
  auto read_components = [&](const char* key, long dim) -> std::optional<std::vector<LaurentPoly>> {
    if (!j.contains(key)) return std::nullopt;
    std::vector<LaurentPoly> cs;
    for (const auto& c : j.at(key)) cs.push_back(laurent_from_json(c, dim));
    return cs;
  };
  in.components1 = read_components("components1", in.d1());
  in.components2 = read_components("components2", in.d2());
  in.validate();
  return in;
}

Json to_json(const ScanResult& r) {
  Json fails = Json::array();
  for (const auto& f : r.failures) fails.push_back(Json{{"n", f.n}, {"reason", f.reason}});
  return Json{{"n_max", r.n_max},
              {"hits", r.hits},
              {"hit_count", r.hits.size()},
              {"failures", fails}};
}

Json to_json(const Transcript& t) {
  Json checks = Json::array();
  for (const auto& c : t.checks) checks.push_back(Json{{"check", c.name}, {"pass", c.pass}});
  return Json{{"checks", checks}, {"all_pass", t.all_pass()}};
}

Json to_json(const Diagnostic& d) {
  return Json{{"diagnostic", to_string(d.code)}, {"detail", d.detail}};
}

Json to_json(const StabilizerInfo& s) {
  Json factors = Json::array();
  for (const Int& f : s.invariant_factors) factors.push_back(f.get_str());
  return Json{{"dimension", s.dimension}, {"invariant_factors", factors}};
}

Json to_json(const HypothesisReport& r) {
  Json comps = Json::array();
  for (const auto& c : r.components)
    comps.push_back(Json{{"side", c.side}, {"index", c.index}, {"stabilizer", to_json(c.stab)}});
  return Json{{"pass", r.pass},
              {"components", comps},
              {"divisor2_stabilizer", to_json(r.divisor2_stabilizer)},
              {"problems", r.problems}};
}

Json to_json(const MorphismCertificate& c) {
  return Json{{"certificate", "morphism"},
              {"map", to_json(c.map.exponents)},
              {"h", c.h},
              {"quotient", to_string(c.quotient)},
              {"residue", c.residue},
              {"torsion_order", c.torsion_order},
              {"etale", c.etale},
              {"verification", to_json(c.transcript)}};
}

Json to_json(const CommonTorusCertificate& c) {
  return Json{{"certificate", "common_torus"},
              {"r0", c.r0},
              {"phi", to_json(c.phi.exponents)},
              {"psi", to_json(c.psi.exponents)},
              {"F0", to_string(c.f0)},
              {"h", c.h},
              {"q_lcm", c.q_lcm.get_str()},
              {"residue", c.residue},
              {"verification", to_json(c.transcript)}};
}

Json to_json(const DominantMapCertificate& c) {
  return Json{{"certificate", "dominant_map"},
              {"h", c.h},
              {"map", to_json(c.map.exponents)},
              {"verification", to_json(c.transcript)}};
}

Json to_json(const ErdosReport& r) {
  Json j{{"x", r.x},
         {"y", r.y},
         {"n_max", r.n_max},
         {"verified_up_to", r.verified_up_to},
         {"inclusion_holds", r.inclusion_holds()}};
  Json fails = Json::array();
  for (const auto& f : r.failures) fails.push_back(Json{{"n", f.n}, {"reason", f.reason}});
  j["failures"] = fails;
  if (r.violation_n) {
    j["violation_n"] = *r.violation_n;
    j["witness_prime"] = r.witness_prime->get_str();
  }
  if (r.power_k) j["power_k"] = *r.power_k;
  return j;
}

Json to_json(const UnityScanResult& r) {
  Json points = Json::array();
  for (const auto& p : r.points) points.push_back(p.exponents);
  return Json{{"order", r.order}, {"points", points}, {"family", r.family}};
}

Json to_json(const ComplexRat& c) {
  return Json::array({format_rational(c.re), format_rational(c.im)});
}

ComplexRat complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("complex number must be [re, im]");
  auto part = [](const Json& e) {
    if (e.is_number_integer()) return Rat(static_cast<long>(e.get<long long>()));
    std::string s = e.get<std::string>();
    return s.find('.') != std::string::npos ? parse_decimal(s) : parse_rational(s);
  };
  return {part(j[0]), part(j[1])};
}

Json to_json(const LatticeZeroSet& z) {
  Json parts = Json::array();
  for (const auto& p : z.parts) {
    Json periods = Json::array();
    for (const auto& q : p.periods) periods.push_back(to_json(q));
    parts.push_back(Json{{"offset", to_json(p.offset)}, {"periods", periods}});
  }
  return Json{{"parts", parts}};
}

LatticeZeroSet zero_set_from_json(const Json& j) {
  LatticeZeroSet z;
  for (const auto& p : j.at("parts")) {
    ZeroPart part;
    part.offset = complex_from_json(p.at("offset"));
    for (const auto& q : p.at("periods")) part.periods.push_back(complex_from_json(q));
    z.parts.push_back(std::move(part));
  }
  validate(z);
  return z;
}

Json to_json(const GrowthFit& f) {
  return Json{{"exponent", f.exponent},
              {"coefficient", f.coefficient},
              {"radii", f.radii},
              {"values", f.values}};
}

}  // namespace torusdiv
