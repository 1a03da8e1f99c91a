#pragma once

#include <optional>
#include <vector>

#include "torusdiv/numeric.hpp"

namespace torusdiv {

/// Complex number with exact rational real and imaginary parts. Irrational
/// parameters enter as high-precision decimals, which are exact rationals
/// here, so all geometry below is decided exactly.
struct ComplexRat {
  Rat re, im;

  bool operator==(const ComplexRat&) const = default;
  friend ComplexRat operator+(const ComplexRat& a, const ComplexRat& b);
  friend ComplexRat operator-(const ComplexRat& a, const ComplexRat& b);
  friend ComplexRat operator*(const ComplexRat& a, const ComplexRat& b);
  ComplexRat scaled(const Int& k) const;
  Rat norm2() const { return re * re + im * im; }
};

/// One translated lattice of simple zeros: offset + Z p1 (+ Z p2). Zero
/// periods mean a single point; two periods must be R-linearly independent.
struct ZeroPart {
  ComplexRat offset;
  std::vector<ComplexRat> periods;  // 0, 1 or 2 entries

  long rank() const { return static_cast<long>(periods.size()); }
};

struct LatticeZeroSet {
  std::vector<ZeroPart> parts;
};

class CountingBudgetError : public std::runtime_error {
 public:
  explicit CountingBudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct CountingOptions {
  unsigned long long point_budget = 100'000'000;
};

/// Validates period independence and shapes. Throws InputError.
void validate(const LatticeZeroSet& z);

/// Number of distinct points with |z| <= t, decided exactly (points shared
/// between parts counted once, by inclusion-exclusion over exact lattice
/// intersections).
long long unreduced_count(const LatticeZeroSet& z, const Rat& t,
                          const CountingOptions& opts = {});

/// N(r) = ord_0 log r + sum over 0 < |z| <= r of log(r / |z|); all zeros are
/// simple, so the truncated counting function N_1 coincides with N.
double counting_function(const LatticeZeroSet& z, double r, const CountingOptions& opts = {});

struct GrowthFit {
  double exponent;     // least-squares slope of log N against log r
  double coefficient;  // fitted leading coefficient exp(intercept)
  std::vector<double> radii;
  std::vector<double> values;  // N(r) on the grid
};

/// Least-squares growth fit over a grid of >= 10 radii spanning >= 2 decades.
GrowthFit growth_fit(const LatticeZeroSet& z, const std::vector<double>& radii,
                     const CountingOptions& opts = {});

/// Geometric grid with `count` radii from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

// Builders for the standard configurations.
LatticeZeroSet integer_line_zeros();                    // Z
LatticeZeroSet gaussian_zeros();                        // Z[i]
LatticeZeroSet rank2_lattice_zeros(const ComplexRat& tau);  // Z + tau Z
/// Z[i] together with the line lattice (i/alpha) Z.
LatticeZeroSet gaussian_and_line_zeros(const Rat& alpha);
/// Z[i] together with (1/alpha) Z[i].
LatticeZeroSet two_gaussian_zeros(const Rat& alpha);

}  // namespace torusdiv
