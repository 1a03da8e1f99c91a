#include <doctest.h>

#include "oracles.hpp"
#include "torusdiv/powersum.hpp"

using namespace torusdiv;

namespace {

PowerSum ps(std::initializer_list<std::pair<long, Rat>> terms) {
  std::vector<PowerSumTerm> ts;
  for (const auto& [c, r] : terms) ts.push_back({Rat(c), r});
  return PowerSum::of(ts);
}

PowerSum rnd_power_sum(std::mt19937_64& g, int max_terms, long height, bool positive_roots) {
  std::vector<PowerSumTerm> ts;
  int k = static_cast<int>(oracles::rand_int(g, 1, max_terms));
  for (int i = 0; i < k; ++i) {
    long num = oracles::rand_int(g, 1, height);
    long den = oracles::rand_int(g, 1, height);
    long sgn = positive_roots || oracles::rand_int(g, 0, 1) ? 1 : -1;
    long c = oracles::rand_int(g, -height, height);
    if (c == 0) c = 1;
    ts.push_back({Rat(c), Rat(sgn * num, den)});
  }
  return PowerSum::of(ts);
}

}  // namespace

TEST_CASE("eval on worked values") {
  CHECK(ps({{1, Rat(2)}, {-1, Rat(1)}}).eval(4) == 15);       // 2^n - 1
  CHECK(ps({{2, Rat(3)}, {-1, Rat(1)}}).eval(2) == 17);       // 2*3^n - 1
  CHECK(ps({{1, Rat(-2)}, {-1, Rat(1)}}).eval(3) == -9);      // (-2)^n - 1
  CHECK(ps({{1, Rat(2)}, {-1, Rat(1)}}).eval(-2) == Rat(-3, 4));
}

TEST_CASE("normalization merges colliding roots and drops zeros") {
  PowerSum f = PowerSum::of({{Rat(1), Rat(2)}, {Rat(2), Rat(2)}, {Rat(-3), Rat(2)}});
  CHECK(f.is_zero());
  PowerSum g = PowerSum::of({{Rat(1), Rat(2)}, {Rat(1), Rat(3)}, {Rat(1), Rat(2)}});
  CHECK(g.terms().size() == 2);
  CHECK(g.eval(1) == 7);
}

TEST_CASE("to_laurent on worked values") {
  GroupBasis two = group_basis({factor_rational(Rat(2))});
  CHECK(to_laurent(ps({{1, Rat(4)}, {-1, Rat(1)}}), two) == parse_laurent("X1^2 - 1", 1));

  GroupBasis b23 = group_basis({factor_rational(Rat(2)), factor_rational(Rat(3))});
  CHECK(to_laurent(ps({{1, Rat(6)}, {-2, Rat(3)}}), b23) == parse_laurent("X1*X2 - 2*X2", 2));

  GroupBasis three = group_basis({factor_rational(Rat(3))});
  CHECK_THROWS_AS(to_laurent(ps({{1, Rat(2)}, {-1, Rat(1)}}), three), TorsionObstruction);
}

TEST_CASE("to_laurent / from_laurent round trip") {
  auto g = oracles::rng(79);
  for (int trial = 0; trial < 60; ++trial) {
    PowerSum f = rnd_power_sum(g, 4, 10, true);
    GroupBasis b = roots_group(f);
    LaurentPoly l = to_laurent(f, b);
    CHECK(from_laurent(l, b) == f);
    // The defining identity at a few n.
    std::vector<Rat> u;
    for (const auto& x : b.basis) u.push_back(x.value());
    for (long n = -2; n <= 4; ++n)
      CHECK(evaluate(l, point_pow(u, n)) == f.eval(n));
  }
}

TEST_CASE("subsample on worked values") {
  CHECK(subsample(ps({{1, Rat(-2)}, {-1, Rat(1)}}), 2, 0) == ps({{1, Rat(4)}, {-1, Rat(1)}}));
  PowerSum f = ps({{1, Rat(2)}, {-1, Rat(1)}});
  CHECK(subsample(f, 1, 0) == f);
  CHECK(subsample(ps({{1, Rat(2)}}), 2, 1) == ps({{2, Rat(4)}}));
  CHECK_THROWS_AS(subsample(f, 0, 0), InputError);
}

TEST_CASE("subsample composes") {
  auto g = oracles::rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    PowerSum f = rnd_power_sum(g, 4, 8, false);
    long q = oracles::rand_int(g, 1, 4), r = oracles::rand_int(g, 0, 3);
    long q2 = oracles::rand_int(g, 1, 4), r2 = oracles::rand_int(g, 0, 3);
    CHECK(subsample(subsample(f, q, r), q2, r2) == subsample(f, q * q2, q * r2 + r));
  }
}

TEST_CASE("divide on worked values") {
  auto q = divide(ps({{1, Rat(4)}, {-1, Rat(1)}}), ps({{1, Rat(2)}, {-1, Rat(1)}}));
  REQUIRE(q.has_value());
  CHECK(*q == ps({{1, Rat(2)}, {1, Rat(1)}}));  // 2^n + 1

  CHECK_FALSE(divide(ps({{1, Rat(9)}, {-1, Rat(1)}}), ps({{1, Rat(2)}, {-1, Rat(1)}})).has_value());

  PowerSum f = ps({{3, Rat(5)}, {-2, Rat(2)}});
  auto one = divide(f, f);
  REQUIRE(one.has_value());
  CHECK(*one == ps({{1, Rat(1)}}));

  CHECK_THROWS_AS(divide(f, PowerSum()), InputError);
  CHECK_THROWS_AS(divide(ps({{1, Rat(4)}, {-1, Rat(1)}}), ps({{1, Rat(-2)}, {-1, Rat(1)}})),
                  TorsionObstruction);
}

TEST_CASE("divide matches evaluation on a window") {
  auto g = oracles::rng(89);
  for (int trial = 0; trial < 60; ++trial) {
    PowerSum f1 = rnd_power_sum(g, 3, 6, true);
    PowerSum mult = rnd_power_sum(g, 3, 6, true);
    PowerSum f2 = f1 * mult;
    auto q = divide(f2, f1);
    REQUIRE(q.has_value());
    CHECK(*q == mult);
    for (long n = -5; n <= 20; ++n) CHECK(f2.eval(n) == f1.eval(n) * q->eval(n));
  }
}

TEST_CASE("is_reduced on worked values") {
  CHECK(is_reduced(ps({{1, Rat(2)}, {-1, Rat(1)}})));
  CHECK_FALSE(is_reduced(ps({{1, Rat(2)}, {-2, Rat(3)}})));
  CHECK(is_reduced(ps({{5, Rat(1)}})));
}

TEST_CASE("roots_group on worked values") {
  GroupBasis a = roots_group(ps({{1, Rat(2)}, {-1, Rat(1)}}));
  REQUIRE(a.rank() == 1);
  CHECK(a.basis[0].value() == 2);

  GroupBasis b = roots_group(ps({{1, Rat(6)}, {-1, Rat(2)}, {-1, Rat(3)}, {1, Rat(1)}}));
  CHECK(b.rank() == 2);

  // Roots {-2, 1} generate exactly <-2>, which is torsion-free with no
  // positive generator.
  GroupBasis c = roots_group(ps({{1, Rat(-2)}, {-1, Rat(1)}}));
  REQUIRE(c.rank() == 1);
  CHECK(c.torsion_order == 1);
  CHECK(c.basis[0].value() == -2);
  CHECK(express(factor_rational(Rat(4)), c).has_value());
  CHECK_FALSE(express(factor_rational(Rat(2)), c).has_value());
  CHECK_FALSE(express(factor_rational(Rat(-1)), c).has_value());
}

TEST_CASE("representation uniqueness: agreement at 2k points forces equality") {
  auto g = oracles::rng(97);
  for (int trial = 0; trial < 120; ++trial) {
    PowerSum f = rnd_power_sum(g, 3, 5, false);
    PowerSum h = rnd_power_sum(g, 3, 5, false);
    if (f == h) continue;
    std::size_t k = std::max(f.terms().size(), h.terms().size());
    bool differs = false;
    for (long n = 0; n < static_cast<long>(2 * k) && !differs; ++n)
      if (f.eval(n) != h.eval(n)) differs = true;
    CHECK(differs);
  }
}
