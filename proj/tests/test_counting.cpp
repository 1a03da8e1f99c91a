#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "torusdiv/counting.hpp"

using namespace torusdiv;

namespace {

ComplexRat cx(long re, long im) { return {Rat(re), Rat(im)}; }
ComplexRat cxq(Rat re, Rat im) { return {re, im}; }

// Brute-force point enumeration over a generous box, with exact dedup.
long long brute_count(const LatticeZeroSet& z, const Rat& t) {
  std::vector<ComplexRat> pts;
  double td = t.get_d();
  for (const auto& part : z.parts) {
    double o = std::sqrt(part.offset.norm2().get_d());
    long bound = 4 * static_cast<long>(td + o + 4);
    if (part.rank() == 0) {
      if (part.offset.norm2() <= t * t) pts.push_back(part.offset);
    } else if (part.rank() == 1) {
      for (long m = -bound; m <= bound; ++m) {
        ComplexRat p = part.offset + part.periods[0].scaled(Int(m));
        if (p.norm2() <= t * t) pts.push_back(p);
      }
    } else {
      for (long m = -bound; m <= bound; ++m)
        for (long n = -bound; n <= bound; ++n) {
          ComplexRat p =
              part.offset + part.periods[0].scaled(Int(m)) + part.periods[1].scaled(Int(n));
          if (p.norm2() <= t * t) pts.push_back(p);
        }
    }
  }
  std::sort(pts.begin(), pts.end(), [](const ComplexRat& a, const ComplexRat& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return static_cast<long long>(pts.size());
}

LatticeZeroSet shifted_integers(Rat shift) {
  LatticeZeroSet z;
  z.parts.push_back(ZeroPart{{shift, Rat(0)}, {cx(1, 0)}});
  return z;
}

}  // namespace

TEST_CASE("unreduced_count on worked values") {
  CHECK(unreduced_count(integer_line_zeros(), Rat(7, 2)) == 7);   // m = -3..3
  CHECK(unreduced_count(gaussian_zeros(), Rat(1)) == 5);          // 0, ±1, ±i
  CHECK(unreduced_count(shifted_integers(Rat(1, 2)), Rat(1)) == 2);
}

TEST_CASE("unreduced_count matches brute force exactly") {
  auto g = oracles::rng(113);
  for (int trial = 0; trial < 25; ++trial) {
    LatticeZeroSet z;
    int parts = static_cast<int>(oracles::rand_int(g, 1, 3));
    for (int p = 0; p < parts; ++p) {
      ZeroPart part;
      part.offset = cxq(Rat(oracles::rand_int(g, -3, 3), oracles::rand_int(g, 1, 2)),
                        Rat(oracles::rand_int(g, -3, 3), 2));
      int rank = static_cast<int>(oracles::rand_int(g, 0, 2));
      if (rank >= 1)
        part.periods.push_back(cxq(Rat(oracles::rand_int(g, 1, 3)), Rat(oracles::rand_int(g, 0, 2))));
      if (rank == 2) {
        part.periods.push_back(cxq(Rat(oracles::rand_int(g, -2, 2)), Rat(oracles::rand_int(g, 1, 3))));
      }
      z.parts.push_back(part);
    }
    try {
      validate(z);
    } catch (const InputError&) {
      continue;  // degenerate random pair of periods
    }
    Rat t(oracles::rand_int(g, 2, 18));
    CHECK(unreduced_count(z, t) == brute_count(z, t));
  }
}

TEST_CASE("duplicate and nested parts count once") {
  LatticeZeroSet z = gaussian_zeros();
  z.parts.push_back(z.parts[0]);                 // exact duplicate
  z.parts.push_back(integer_line_zeros().parts[0]);  // contained in Z[i]
  CHECK(unreduced_count(z, Rat(1)) == 5);
  CHECK(unreduced_count(z, Rat(10)) == unreduced_count(gaussian_zeros(), Rat(10)));
}

TEST_CASE("counting_function on worked values") {
  // Z at r = 10: N = log 10 + 2 (10 log 10 - log 10!).
  double expected = std::log(10.0) + 2 * (10 * std::log(10.0) - std::lgamma(11.0));
  double got = counting_function(integer_line_zeros(), 10.0);
  CHECK(std::abs(got - expected) < 1e-9 * expected);

  // A single zero at the origin: N(r) = log r.
  LatticeZeroSet origin;
  origin.parts.push_back(ZeroPart{{Rat(0), Rat(0)}, {}});
  CHECK(counting_function(origin, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));

  // Z[i] at r = 100: within 3% of pi r^2 / 2 by the Gauss circle count.
  double n = counting_function(gaussian_zeros(), 100.0);
  double gauss = M_PI * 100.0 * 100.0 / 2;
  CHECK(std::abs(n - gauss) < 0.03 * gauss);
}

TEST_CASE("counting_function equals the n(t) integral") {
  auto g = oracles::rng(127);
  for (int trial = 0; trial < 8; ++trial) {
    LatticeZeroSet z;
    z.parts.push_back(ZeroPart{cxq(Rat(oracles::rand_int(g, 0, 2)), Rat(oracles::rand_int(g, 0, 2), 2)),
                               {cx(1, 0), cx(0, 1)}});
    if (trial % 2 == 0) z.parts.push_back(integer_line_zeros().parts[0]);
    double r = 12.5;
    // Quadrature oracle: N(r) = ord0 log r + sum over jump radii of
    // n(t) log(t_{i+1}/t_i) with n evaluated at segment midpoints, segments
    // refined geometrically between consecutive integers (n(t) is a step
    // function with jumps only at point moduli).
    long ord0 = unreduced_count(z, Rat(1, 1000)) > 0 ? 1 : 0;
    double acc = ord0 * std::log(r);
    const int steps = 4000;
    double lo = 1e-6, hi = r;
    double prev_t = lo;
    long long prev_n = 0;
    for (int i = 1; i <= steps; ++i) {
      double t = lo * std::pow(hi / lo, double(i) / steps);
      Rat tq(static_cast<long>(t * 1'000'000), 1'000'000);
      long long nt = tq > 0 ? unreduced_count(z, tq) : 0;
      acc += (nt - ord0) * std::log(t / prev_t);
      prev_t = t;
      prev_n = nt;
    }
    (void)prev_n;
    double direct = counting_function(z, r);
    CHECK(std::abs(direct - acc) < 5e-2 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("counting_function is rotation invariant") {
  // Rotation by the exactly-unimodular rational point (3+4i)/5.
  ComplexRat rot = cxq(Rat(3, 5), Rat(4, 5));
  LatticeZeroSet z = gaussian_zeros();
  LatticeZeroSet zr = z;
  for (auto& part : zr.parts) {
    part.offset = part.offset * rot;
    for (auto& p : part.periods) p = p * rot;
  }
  double a = counting_function(z, 60.0);
  double b = counting_function(zr, 60.0);
  CHECK(std::abs(a - b) < 1e-9 * a);
}

TEST_CASE("counting_function is nondecreasing in r") {
  LatticeZeroSet z = gaussian_and_line_zeros(parse_decimal("1.41421356237309504880168872420969807857"));
  double prev = 0;
  for (double r = 2; r <= 40; r *= 1.5) {
    double n = counting_function(z, r);
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("growth_fit on the standard configurations (unit-scale grids)") {
  CountingOptions opts;
  {
    GrowthFit fit = growth_fit(integer_line_zeros(), geometric_grid(10, 2000, 12), opts);
    CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.05));
  }
  {
    GrowthFit fit = growth_fit(gaussian_zeros(), geometric_grid(10, 1000, 12), opts);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.03));
    CHECK(fit.coefficient == doctest::Approx(M_PI / 2).epsilon(0.05));
  }
}

TEST_CASE("growth_fit rejects degenerate grids") {
  CHECK_THROWS_AS(growth_fit(integer_line_zeros(), {10, 20, 30}, {}), InputError);
  CHECK_THROWS_AS(growth_fit(integer_line_zeros(), geometric_grid(10, 50, 12), {}), InputError);
}

TEST_CASE("point budget is enforced") {
  CountingOptions opts;
  opts.point_budget = 1000;
  CHECK_THROWS_AS(counting_function(gaussian_zeros(), 500.0, opts), CountingBudgetError);
}

TEST_CASE("zero set validation") {
  LatticeZeroSet bad;
  bad.parts.push_back(ZeroPart{cx(0, 0), {cx(1, 0), cx(2, 0)}});  // dependent periods
  CHECK_THROWS_AS(validate(bad), InputError);
  LatticeZeroSet zero_period;
  zero_period.parts.push_back(ZeroPart{cx(0, 0), {cx(0, 0)}});
  CHECK_THROWS_AS(validate(zero_period), InputError);
}
