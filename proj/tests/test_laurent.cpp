#include <doctest.h>

#include "oracles.hpp"
#include "torusdiv/laurent.hpp"

using namespace torusdiv;

namespace {

LaurentPoly rnd_poly(std::mt19937_64& g, long dim, int max_terms, long coeff_height,
                     long exp_range) {
  LaurentPoly f(dim);
  int terms = static_cast<int>(oracles::rand_int(g, 1, max_terms));
  for (int t = 0; t < terms; ++t) {
    Exponents u(dim);
    for (long j = 0; j < dim; ++j) u[j] = oracles::rand_int(g, -exp_range, exp_range);
    long c = oracles::rand_int(g, -coeff_height, coeff_height);
    if (c == 0) c = 1;
    f.add_term(u, Rat(c));
  }
  return f;
}

std::vector<Rat> rnd_point(std::mt19937_64& g, long dim) {
  std::vector<Rat> x;
  for (long j = 0; j < dim; ++j) {
    long num = oracles::rand_int(g, 1, 9) * (oracles::rand_int(g, 0, 1) ? 1 : -1);
    long den = oracles::rand_int(g, 1, 9);
    x.emplace_back(num, den);
  }
  return x;
}

}  // namespace

TEST_CASE("parse on worked values") {
  LaurentPoly f = parse_laurent("X1*X2 - 1", 2);
  CHECK(f.coefficient({1, 1}) == 1);
  CHECK(f.coefficient({0, 0}) == -1);
  CHECK(f.term_count() == 2);

  LaurentPoly g = parse_laurent("X1^-1 + 2", 1);
  CHECK(g.coefficient({-1}) == 1);
  CHECK(g.coefficient({0}) == 2);

  LaurentPoly h = parse_laurent("X1^2 - 1", 1);
  CHECK(h.coefficient({2}) == 1);
  CHECK(h.coefficient({0}) == -1);

  LaurentPoly k = parse_laurent("(X1 - 1)*(X2 - 1)", 2);
  CHECK(k == parse_laurent("X1*X2 - X1 - X2 + 1", 2));

  LaurentPoly frac = parse_laurent("3/2*X1 - 1/3", 1);
  CHECK(frac.coefficient({1}) == Rat(3, 2));
  CHECK(frac.coefficient({0}) == Rat(-1, 3));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_laurent("X3 - 1", 2), ParseError);
  CHECK_THROWS_AS(parse_laurent("X1 + ", 1), ParseError);
  CHECK_THROWS_AS(parse_laurent("X1 & 2", 1), ParseError);
  try {
    parse_laurent("X1 + (X1*", 1);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position >= 9);
  }
}

TEST_CASE("to_string round trips through parse") {
  auto g = oracles::rng(53);
  for (int trial = 0; trial < 120; ++trial) {
    long dim = oracles::rand_int(g, 1, 3);
    LaurentPoly f = rnd_poly(g, dim, 5, 9, 3);
    CHECK(parse_laurent(to_string(f), dim) == f);
  }
  CHECK(to_string(parse_laurent("X1^2 - 1", 1)) == "X1^2 - 1");
  CHECK(to_string(LaurentPoly(2)) == "0");
}

TEST_CASE("evaluate on worked values") {
  CHECK(evaluate(parse_laurent("X1*X2 - 1", 2), {Rat(2), Rat(1, 2)}) == 0);
  CHECK(evaluate(parse_laurent("X1^2 - 1", 1), {Rat(3)}) == 8);
  CHECK(evaluate(parse_laurent("X1 + X2 - 1", 2), {Rat(2), Rat(3)}) == 4);
  CHECK_THROWS_AS(evaluate(parse_laurent("X1", 1), {Rat(1), Rat(1)}), InputError);
}

TEST_CASE("exact_divide on worked values") {
  auto q = exact_divide(parse_laurent("X1^2 - 1", 1), parse_laurent("X1 - 1", 1));
  REQUIRE(q.has_value());
  CHECK(*q == parse_laurent("X1 + 1", 1));

  auto r = exact_divide(parse_laurent("X1*X2 - X1 - X2 + 1", 2), parse_laurent("X1 - 1", 2));
  REQUIRE(r.has_value());
  CHECK(*r == parse_laurent("X2 - 1", 2));

  CHECK_FALSE(exact_divide(parse_laurent("X1^2 + 1", 1), parse_laurent("X1 - 1", 1)).has_value());
  CHECK_THROWS_AS(exact_divide(parse_laurent("X1", 1), LaurentPoly(1)), InputError);
}

TEST_CASE("exact_divide recovers random products") {
  auto g = oracles::rng(59);
  for (int trial = 0; trial < 150; ++trial) {
    long dim = oracles::rand_int(g, 1, 3);
    LaurentPoly f = rnd_poly(g, dim, 6, 50, 3);
    LaurentPoly h = rnd_poly(g, dim, 6, 50, 3);
    auto q = exact_divide(f * h, h);
    REQUIRE(q.has_value());
    CHECK(*q == f);
  }
}

TEST_CASE("exact_divide refuses non-multiples") {
  auto g = oracles::rng(61);
  int refused = 0;
  for (int trial = 0; trial < 80; ++trial) {
    long dim = oracles::rand_int(g, 1, 2);
    LaurentPoly f = rnd_poly(g, dim, 4, 9, 2);
    LaurentPoly h = rnd_poly(g, dim, 4, 9, 2);
    auto q = exact_divide(f, h);
    if (!q) {
      ++refused;
      continue;
    }
    CHECK(h * *q == f);
  }
  CHECK(refused > 10);  // random pairs are rarely exact multiples
}

TEST_CASE("monomial_substitute on worked values") {
  CHECK(monomial_substitute(parse_laurent("X1 - 1", 1), IntMatrix::from_rows({{2}})) ==
        parse_laurent("X1^2 - 1", 1));
  CHECK(monomial_substitute(parse_laurent("X1 - 1", 1), IntMatrix::from_rows({{1, 0}})) ==
        parse_laurent("X1 - 1", 2));
  CHECK(monomial_substitute(parse_laurent("X1 - 1", 1), IntMatrix::from_rows({{1, 1}})) ==
        parse_laurent("X1*X2 - 1", 2));
}

TEST_CASE("monomial_substitute functoriality and evaluation compatibility") {
  auto g = oracles::rng(67);
  for (int trial = 0; trial < 60; ++trial) {
    long d = oracles::rand_int(g, 1, 3), s = oracles::rand_int(g, 1, 3),
         t = oracles::rand_int(g, 1, 3);
    LaurentPoly f = rnd_poly(g, d, 4, 9, 2);
    IntMatrix a(d, s), b(s, t);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < s; ++j) a.at(i, j) = oracles::rand_int(g, -2, 2);
    for (long i = 0; i < s; ++i)
      for (long j = 0; j < t; ++j) b.at(i, j) = oracles::rand_int(g, -2, 2);
    CHECK(monomial_substitute(f, a * b) == monomial_substitute(monomial_substitute(f, a), b));

    TorusMorphism phi{a};
    std::vector<Rat> y = rnd_point(g, s);
    CHECK(evaluate(monomial_substitute(f, a), y) == evaluate(f, phi.apply(y)));
  }
}

TEST_CASE("reduce_at on worked values") {
  CHECK(reduce_at(parse_laurent("X1^3 - X1", 1), {1}) == parse_laurent("X1^2 - 1", 1));
  CHECK(reduce_at(parse_laurent("X1*X2 - 1", 2), {0, 0}) == parse_laurent("X1*X2 - 1", 2));
  CHECK(reduce_at(parse_laurent("X1^-1*X2 - 2*X1", 2), {-1, 1}) ==
        parse_laurent("1 - 2*X1^2*X2^-1", 2));
  CHECK_THROWS_AS(reduce_at(parse_laurent("X1 - 1", 1), {5}), InputError);
}

TEST_CASE("stabilizer on worked values") {
  {
    StabilizerInfo s = stabilizer(parse_laurent("X1*X2 - 1", 2));
    CHECK(s.dimension == 1);
    CHECK(s.invariant_factors.empty());
  }
  {
    StabilizerInfo s = stabilizer(parse_laurent("X1^2 - 1", 1));
    CHECK(s.dimension == 0);
    CHECK(s.invariant_factors == std::vector<Int>{2});
  }
  {
    StabilizerInfo s = stabilizer(parse_laurent("X1*X2 - X1 - X2 + 1", 2));
    CHECK(s.dimension == 0);
    CHECK(s.invariant_factors.empty());
    CHECK(s.trivial());
  }
  CHECK_THROWS_AS(stabilizer(LaurentPoly(2)), InputError);
}

TEST_CASE("stabilizer dimension is invariant under unimodular substitution and monomials") {
  auto g = oracles::rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    long d = oracles::rand_int(g, 1, 3);
    LaurentPoly f = rnd_poly(g, d, 4, 5, 2);
    StabilizerInfo base = stabilizer(f);

    IntMatrix u = IntMatrix::identity(d);
    for (int k = 0; k < 4; ++k) {
      long i = oracles::rand_int(g, 0, d - 1), j = oracles::rand_int(g, 0, d - 1);
      if (i == j) continue;
      long c = oracles::rand_int(g, -2, 2);
      for (long t = 0; t < d; ++t) u.at(i, t) += c * u.at(j, t);
    }
    CHECK(stabilizer(monomial_substitute(f, u)).dimension == base.dimension);

    Exponents mono(d);
    for (long j = 0; j < d; ++j) mono[j] = oracles::rand_int(g, -2, 2);
    CHECK(stabilizer(f * LaurentPoly::monomial(d, mono, Rat(3))).dimension == base.dimension);

    CHECK((base.dimension > 0) == omit_variables(f).has_value());
  }
}

TEST_CASE("omit_variables on worked values") {
  {
    auto o = omit_variables(parse_laurent("X1*X2 - 1", 2));
    REQUIRE(o.has_value());
    CHECK(o->reduced == parse_laurent("X1 - 1", 1));
    CHECK(abs(det(o->change)) == 1);
  }
  {
    auto o = omit_variables(parse_laurent("X1^2*X2^2 - 1", 2));
    REQUIRE(o.has_value());
    CHECK(o->reduced == parse_laurent("X1^2 - 1", 1));
  }
  CHECK_FALSE(omit_variables(parse_laurent("X1 + X2 - 1", 2)).has_value());
}

TEST_CASE("omit_variables change of variables actually omits the trailing variables") {
  auto g = oracles::rng(73);
  for (int trial = 0; trial < 40; ++trial) {
    long d = oracles::rand_int(g, 2, 3);
    LaurentPoly f = rnd_poly(g, d, 3, 5, 2);
    auto o = omit_variables(f);
    if (!o) continue;
    LaurentPoly moved = monomial_substitute(f, o->change);
    long r = o->reduced.dim();
    // All support points agree beyond the first r coordinates.
    Exponents tail;
    bool first = true;
    for (const auto& [u, c] : moved.terms()) {
      Exponents t(u.begin() + r, u.end());
      if (first) { tail = t; first = false; }
      CHECK(t == tail);
    }
  }
}

TEST_CASE("torus morphism basics") {
  TorusMorphism phi{IntMatrix::from_rows({{2, 1}, {0, 1}})};
  CHECK(phi.is_isogeny());
  CHECK(phi.is_etale());
  std::vector<Rat> img = phi.apply({Rat(2), Rat(3)});
  CHECK(img == std::vector<Rat>{Rat(12), Rat(3)});
  TorusMorphism proj{IntMatrix::from_rows({{1, 0}})};
  CHECK_FALSE(proj.is_isogeny());
}
