#pragma once

#include <json.hpp>

#include "torusdiv/analysis.hpp"
#include "torusdiv/counting.hpp"

namespace torusdiv {

using Json = nlohmann::json;

// Big integers and rationals travel as decimal strings; prime sets as arrays
// (numbers or strings accepted on input); matrices as arrays of row arrays of
// decimal strings.

Json to_json(const Int& v);
Json to_json(const Rat& v);
Json to_json(const PrimeSet& s);
PrimeSet prime_set_from_json(const Json& j);

Json to_json(const FactoredRational& f);
Json to_json(const IntMatrix& m);
IntMatrix int_matrix_from_json(const Json& j);

Json to_json(const GroupBasis& b);
Json to_json(const LaurentPoly& f);  // list of {exponents, coeff}
LaurentPoly laurent_from_json(const Json& j, long dim);

Json to_json(const PowerSum& f);
PowerSum power_sum_from_json(const Json& j);

Json to_json(const ProblemInstance& in);
ProblemInstance instance_from_json(const Json& j);

Json to_json(const ScanResult& r);
Json to_json(const Transcript& t);
Json to_json(const Diagnostic& d);
Json to_json(const StabilizerInfo& s);
Json to_json(const HypothesisReport& r);
Json to_json(const MorphismCertificate& c);
Json to_json(const CommonTorusCertificate& c);
Json to_json(const DominantMapCertificate& c);
Json to_json(const ErdosReport& r);
Json to_json(const UnityScanResult& r);

Json to_json(const ComplexRat& c);
ComplexRat complex_from_json(const Json& j);
Json to_json(const LatticeZeroSet& z);
LatticeZeroSet zero_set_from_json(const Json& j);
Json to_json(const GrowthFit& f);

}  // namespace torusdiv
