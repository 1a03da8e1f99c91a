#include <doctest.h>

#include "oracles.hpp"
#include "torusdiv/multgroup.hpp"

using namespace torusdiv;

namespace {

FactoredRational fr(long num, long den = 1) { return factor_rational(Rat(num, den)); }

std::vector<FactoredRational> gens(std::initializer_list<long> xs) {
  std::vector<FactoredRational> out;
  for (long x : xs) out.push_back(fr(x));
  return out;
}

bool same_group(const GroupBasis& a, const GroupBasis& b) {
  if (a.torsion_order != b.torsion_order) return false;
  for (const auto& g : a.basis)
    if (!express(g, b)) return false;
  for (const auto& g : b.basis)
    if (!express(g, a)) return false;
  return true;
}

}  // namespace

TEST_CASE("group_basis on worked values") {
  {
    GroupBasis b = group_basis(gens({4, 8}));
    REQUIRE(b.rank() == 1);
    CHECK(b.basis[0].value() == 2);
    CHECK(b.torsion_order == 1);
  }
  {
    GroupBasis b = group_basis(gens({2, -2}));
    REQUIRE(b.rank() == 1);
    CHECK(b.basis[0].value() == 2);
    CHECK(b.torsion_order == 2);
  }
  {
    GroupBasis b = group_basis(gens({2, 3}));
    CHECK(b.rank() == 2);
    CHECK(b.torsion_order == 1);
  }
  {
    GroupBasis b = group_basis({});
    CHECK(b.rank() == 0);
    CHECK(b.torsion_order == 1);
  }
}

TEST_CASE("the group generated by -2 keeps its signed generator") {
  GroupBasis b = group_basis(gens({-2}));
  REQUIRE(b.rank() == 1);
  CHECK(b.torsion_order == 1);
  CHECK(b.basis[0].value() == -2);
  // Membership oracle: -2 and 4 lie in <-2>, while 2 and -1 do not.
  CHECK(express(fr(-2), b).has_value());
  CHECK(express(fr(4), b).has_value());
  CHECK_FALSE(express(fr(2), b).has_value());
  CHECK_FALSE(express(fr(-1), b).has_value());
}

TEST_CASE("express on worked values") {
  GroupBasis two = group_basis(gens({2}));
  auto e = express(fr(8), two);
  REQUIRE(e.has_value());
  CHECK(e->exponents == std::vector<Int>{3});
  CHECK_FALSE(e->negated);
  CHECK_FALSE(express(fr(-2), two).has_value());

  GroupBasis b23 = group_basis(gens({2, 3}));
  auto f = express(fr(6), b23);
  REQUIRE(f.has_value());
  CHECK(f->exponents == std::vector<Int>{1, 1});

  GroupBasis pm2 = group_basis(gens({2, -2}));
  auto g = express(fr(-2), pm2);
  REQUIRE(g.has_value());
  CHECK(g->negated);
  CHECK(reconstruct(*g, pm2).value() == -2);
}

TEST_CASE("is_independent on worked values") {
  CHECK(is_independent(gens({2, 3})));
  CHECK_FALSE(is_independent(gens({4, 8})));  // 4^3 = 8^2
  CHECK(is_independent(gens({2})));
  CHECK_FALSE(is_independent(gens({2, -2})));
  CHECK_FALSE(is_independent(gens({-1})));
}

TEST_CASE("power_index on worked values") {
  auto d = power_index(fr(2), gens({-2}));
  REQUIRE(d.has_value());
  CHECK(*d == 2);
  auto e = power_index(fr(2), gens({2, 3}));
  REQUIRE(e.has_value());
  CHECK(*e == 1);
  CHECK_FALSE(power_index(fr(5), gens({2, 3})).has_value());
  auto f = power_index(fr(-1), gens({2}));
  REQUIRE(f.has_value());
  CHECK(*f == 2);
}

TEST_CASE("random generators are expressible over their basis, exactly") {
  auto g = oracles::rng(43);
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<FactoredRational> xs;
    int k = static_cast<int>(oracles::rand_int(g, 1, 4));
    for (int i = 0; i < k; ++i) {
      long num = oracles::rand_int(g, 1, 100);
      long den = oracles::rand_int(g, 1, 100);
      long sgn = oracles::rand_int(g, 0, 1) ? 1 : -1;
      xs.push_back(fr(sgn * num, den));
    }
    GroupBasis b = group_basis(xs);
    CHECK((b.torsion_order == 1 || b.torsion_order == 2));
    for (const auto& x : xs) {
      auto e = express(x, b);
      REQUIRE(e.has_value());
      REQUIRE(reconstruct(*e, b) == x);
    }
    // Idempotence: the basis (plus -1 when torsion 2) regenerates the group.
    std::vector<FactoredRational> regen = b.basis;
    if (b.torsion_order == 2) regen.push_back(FactoredRational::minus_one());
    CHECK(same_group(b, group_basis(regen)));
  }
}

TEST_CASE("power_index is minimal") {
  auto g = oracles::rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<FactoredRational> xs;
    for (int i = 0, k = static_cast<int>(oracles::rand_int(g, 1, 3)); i < k; ++i)
      xs.push_back(fr(oracles::rand_int(g, 2, 40) * (oracles::rand_int(g, 0, 1) ? 1 : -1)));
    FactoredRational target = fr(oracles::rand_int(g, 2, 30));
    auto d = power_index(target, xs);
    if (!d) continue;
    REQUIRE(*d >= 1);
    GroupBasis b = group_basis(xs);
    REQUIRE(d->fits_slong_p());
    long dl = d->get_si();
    CHECK(express(target.pow(dl), b).has_value());
    for (long e = 1; e < dl; ++e) CHECK_FALSE(express(target.pow(e), b).has_value());
  }
}
