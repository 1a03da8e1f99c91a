#include <doctest.h>

#include "torusdiv/jsonio.hpp"

using namespace torusdiv;

TEST_CASE("instance round trips through JSON") {
  Json j = Json::parse(R"({
    "s_primes": [2, 3],
    "g1": ["2"],
    "g2": ["2", "3"],
    "F1": "X1 - 1",
    "F2": "X1*X2 - X1 - X2 + 1",
    "components2": ["X1 - 1", "X2 - 1"]
  })");
  ProblemInstance in = instance_from_json(j);
  CHECK(in.d1() == 1);
  CHECK(in.d2() == 2);
  CHECK(in.s.contains(Int(3)));
  REQUIRE(in.components2.has_value());
  CHECK(in.components2->size() == 2);

  Json back = to_json(in);
  ProblemInstance again = instance_from_json(back);
  CHECK(again.f1 == in.f1);
  CHECK(again.f2 == in.f2);
  CHECK(again.g1 == in.g1);
  CHECK(again.g2 == in.g2);
}

TEST_CASE("rationals and big integers serialize as strings") {
  CHECK(to_json(Rat(-3, 4)) == Json("-3/4"));
  Int big = int_pow(Int(10), 30) + 7;
  CHECK(to_json(big) == Json(big.get_str()));
  PrimeSet s = prime_set_from_json(Json::parse(R"([2, "1000000000000000000000007"])"));
  CHECK(s.size() == 2);
}

TEST_CASE("laurent polynomials accept string or term-list form") {
  LaurentPoly f = laurent_from_json(Json("X1^2 - 1"), 1);
  Json terms = Json::parse(R"([{"exponents": [2], "coeff": "1"},
                               {"exponents": [0], "coeff": "-1"}])");
  CHECK(laurent_from_json(terms, 1) == f);
  Json j = to_json(f);
  CHECK(laurent_from_json(j, 1) == f);
  CHECK(j.at("text") == "X1^2 - 1");
}

TEST_CASE("matrices round trip as row arrays of strings") {
  IntMatrix m = IntMatrix::from_rows({{1, -2}, {0, 5}});
  CHECK(int_matrix_from_json(to_json(m)) == m);
}

TEST_CASE("power sums round trip") {
  PowerSum f = PowerSum::of({{Rat(2), Rat(3)}, {Rat(-1), Rat(1, 2)}});
  CHECK(power_sum_from_json(to_json(f)) == f);
}

TEST_CASE("zero sets round trip, including decimal offsets") {
  Json j = Json::parse(R"({
    "parts": [
      {"offset": ["0", "0"], "periods": [["1", "0"], ["0", "1"]]},
      {"offset": ["0.5", "0"], "periods": [["0", "0.70710678118654752440"]]}
    ]
  })");
  LatticeZeroSet z = zero_set_from_json(j);
  REQUIRE(z.parts.size() == 2);
  CHECK(z.parts[1].offset.re == Rat(1, 2));
  Json back = to_json(z);
  LatticeZeroSet again = zero_set_from_json(back);
  CHECK(again.parts[1].offset == z.parts[1].offset);
  CHECK(again.parts[1].periods == z.parts[1].periods);
}

TEST_CASE("certificate serialization carries the verification block") {
  MorphismCertificate cert;
  cert.map.exponents = IntMatrix::identity(1);
  cert.h = 2;
  cert.quotient = parse_laurent("1", 1);
  cert.etale = true;
  cert.transcript.record("phi(g1^h) == g2^h", true);
  Json j = to_json(cert);
  CHECK(j.at("h") == 2);
  CHECK(j.at("verification").at("all_pass") == true);
  CHECK(j.at("map")[0][0] == "1");
}
