#include "torusdiv/counting.hpp"

#include <algorithm>
#include <cmath>

#include "torusdiv/lattice.hpp"

namespace torusdiv {

ComplexRat operator+(const ComplexRat& a, const ComplexRat& b) {
  return {a.re + b.re, a.im + b.im};
}
ComplexRat operator-(const ComplexRat& a, const ComplexRat& b) {
  return {a.re - b.re, a.im - b.im};
}
ComplexRat operator*(const ComplexRat& a, const ComplexRat& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
ComplexRat ComplexRat::scaled(const Int& k) const { return {re * Rat(k), im * Rat(k)}; }

void validate(const LatticeZeroSet& z) {
  if (z.parts.empty()) throw InputError("zero set: no parts");
  if (z.parts.size() > 12) throw InputError("zero set: too many parts");
  for (const auto& part : z.parts) {
    if (part.periods.size() > 2) throw InputError("zero set: more than two periods in a part");
    for (const auto& p : part.periods)
      if (p.re == 0 && p.im == 0) throw InputError("zero set: zero period");
    if (part.periods.size() == 2) {
      Rat cross = part.periods[0].re * part.periods[1].im -
                  part.periods[0].im * part.periods[1].re;
      if (cross == 0)
        throw InputError("zero set: rank-2 part with R-linearly dependent periods");
    }
  }
}

namespace {

double to_double(const Rat& q) { return q.get_d(); }

struct Kahan {
  double sum = 0, carry = 0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double abs_upper(const ComplexRat& c) {
  return std::sqrt(to_double(c.norm2())) * (1 + 1e-12) + 1e-300;
}

// ---------------------------------------------------------------------------
// Exact affine-lattice intersection

std::vector<ComplexRat> reduce_periods(const std::vector<ComplexRat>& gens) {
  std::vector<ComplexRat> nz;
  for (const auto& g : gens)
    if (!(g.re == 0 && g.im == 0)) nz.push_back(g);
  if (nz.empty()) return {};
  Int den(1);
  for (const auto& g : nz) {
    den = lcm(den, Int(g.re.get_den()));
    den = lcm(den, Int(g.im.get_den()));
  }
  IntMatrix m(static_cast<long>(nz.size()), 2);
  for (std::size_t i = 0; i < nz.size(); ++i) {
    m.at(static_cast<long>(i), 0) = Int(nz[i].re * Rat(den));
    m.at(static_cast<long>(i), 1) = Int(nz[i].im * Rat(den));
  }
  HnfResult f = hnf(m);
  std::vector<ComplexRat> out;
  for (long i = 0; i < f.rank; ++i)
    out.push_back({Rat(f.h.at(i, 0), den), Rat(f.h.at(i, 1), den)});
  for (auto& p : out) {
    p.re.canonicalize();
    p.im.canonicalize();
  }
  return out;
}

// Solves sum_i w_i col_i = c over the integers for rational complex columns;
// returns particular solution + kernel basis through `kernel`.
std::optional<std::vector<Int>> solve_complex_system(const std::vector<ComplexRat>& cols,
                                                     const ComplexRat& c, IntMatrix* kernel) {
  Int den(1);
  for (const auto& v : cols) {
    den = lcm(den, Int(v.re.get_den()));
    den = lcm(den, Int(v.im.get_den()));
  }
  den = lcm(den, Int(c.re.get_den()));
  den = lcm(den, Int(c.im.get_den()));
  IntMatrix m(static_cast<long>(cols.size()), 2);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    m.at(static_cast<long>(i), 0) = Int(cols[i].re * Rat(den));
    m.at(static_cast<long>(i), 1) = Int(cols[i].im * Rat(den));
  }
  std::vector<Int> rhs{Int(c.re * Rat(den)), Int(c.im * Rat(den))};
  auto w = solve_integral(m, rhs);
  if (kernel) *kernel = left_kernel(m);
  return w;
}

/// Intersection of two affine lattices as a part; nullopt when disjoint.
std::optional<ZeroPart> intersect(const ZeroPart& a, const ZeroPart& b) {
  std::vector<ComplexRat> cols = a.periods;
  for (const auto& q : b.periods) cols.push_back({-q.re, -q.im});
  IntMatrix kernel;
  auto w = solve_complex_system(cols, b.offset - a.offset, &kernel);
  if (!w) return std::nullopt;
  ZeroPart out;
  out.offset = a.offset;
  for (std::size_t i = 0; i < a.periods.size(); ++i)
    out.offset = out.offset + a.periods[i].scaled((*w)[i]);
  std::vector<ComplexRat> gens;
  for (long r = 0; r < kernel.rows(); ++r) {
    ComplexRat v{Rat(0), Rat(0)};
    for (std::size_t i = 0; i < a.periods.size(); ++i)
      v = v + a.periods[i].scaled(kernel.at(r, static_cast<long>(i)));
    gens.push_back(v);
  }
  out.periods = reduce_periods(gens);
  return out;
}

bool contains_zero(const ZeroPart& part) {
  ComplexRat minus_o{-part.offset.re, -part.offset.im};
  if (part.periods.empty()) return part.offset.re == 0 && part.offset.im == 0;
  return solve_complex_system(part.periods, minus_o, nullptr).has_value();
}

// ---------------------------------------------------------------------------
// Enumeration

unsigned long long estimate_points(const ZeroPart& part, double t) {
  double reach = t + abs_upper(part.offset);
  switch (part.rank()) {
    case 0: return 1;
    case 1: {
      double lp = abs_upper(part.periods[0]);
      return static_cast<unsigned long long>(2 * reach / lp + 8);
    }
    default: {
      double covol = std::abs(to_double(part.periods[0].re * part.periods[1].im -
                                        part.periods[0].im * part.periods[1].re));
      double lp = abs_upper(part.periods[0]) + abs_upper(part.periods[1]);
      return static_cast<unsigned long long>(3.2 * reach * reach / covol + 4 * reach / covol * lp +
                                             16);
    }
  }
}

// Exact number of lattice points of the part with |z| <= t.
long long exact_count(const ZeroPart& part, const Rat& t) {
  Rat t2 = t * t;
  double td = to_double(t) * (1 + 1e-12);
  if (part.rank() == 0) return part.offset.norm2() <= t2 ? 1 : 0;
  if (part.rank() == 1) {
    const ComplexRat& p = part.periods[0];
    double lp = std::sqrt(to_double(p.norm2()));
    double reach = (td + abs_upper(part.offset)) / lp + 2;
    long long lo = static_cast<long long>(-reach), hi = static_cast<long long>(reach);
    long long count = 0;
    for (long long m = lo; m <= hi; ++m) {
      ComplexRat z = part.offset + p.scaled(Int(static_cast<long>(m)));
      if (z.norm2() <= t2) ++count;
    }
    return count;
  }
  const ComplexRat& p = part.periods[0];
  const ComplexRat& q = part.periods[1];
  double pp = to_double(p.norm2());
  double lp = std::sqrt(pp);
  double height = std::abs(to_double(p.re * q.im - p.im * q.re)) / lp;
  double reach = td + abs_upper(part.offset);
  long long nlo = static_cast<long long>(-(reach / height + 2));
  long long nhi = static_cast<long long>(reach / height + 2);
  long long count = 0;
  for (long long n = nlo; n <= nhi; ++n) {
    ComplexRat base = part.offset + q.scaled(Int(static_cast<long>(n)));
    double bx = to_double(base.re), by = to_double(base.im);
    double proj = (bx * to_double(p.re) + by * to_double(p.im)) / pp;
    double d2 = bx * bx + by * by - proj * proj * pp;
    double disc = td * td - d2;
    double w = disc > 0 ? std::sqrt(disc / pp) : 0;
    long long mlo = static_cast<long long>(std::floor(-proj - w)) - 2;
    long long mhi = static_cast<long long>(std::ceil(-proj + w)) + 2;
    for (long long m = mlo; m <= mhi; ++m) {
      ComplexRat z = base + p.scaled(Int(static_cast<long>(m)));
      if (z.norm2() <= t2) ++count;
    }
  }
  return count;
}

// Kahan sum of log(r / |z|) over the nonzero part points with |z| <= r,
// in double precision (points are separated well above double resolution).
double log_sum(const ZeroPart& part, double r) {
  double r2 = r * r;
  Kahan acc;
  auto visit = [&](double x, double y) {
    double d2 = x * x + y * y;
    if (d2 > r2 || d2 < 1e-24) return;
    acc.add(0.5 * std::log(r2 / d2));
  };
  double ox = to_double(part.offset.re), oy = to_double(part.offset.im);
  if (part.rank() == 0) {
    visit(ox, oy);
    return acc.sum;
  }
  if (part.rank() == 1) {
    double px = to_double(part.periods[0].re), py = to_double(part.periods[0].im);
    double lp = std::hypot(px, py);
    double reach = (r + std::hypot(ox, oy)) / lp + 2;
    long long lo = static_cast<long long>(-reach), hi = static_cast<long long>(reach);
    for (long long m = lo; m <= hi; ++m) visit(ox + m * px, oy + m * py);
    return acc.sum;
  }
  double px = to_double(part.periods[0].re), py = to_double(part.periods[0].im);
  double qx = to_double(part.periods[1].re), qy = to_double(part.periods[1].im);
  double pp = px * px + py * py;
  double lp = std::sqrt(pp);
  double height = std::abs(px * qy - py * qx) / lp;
  double reach = r + std::hypot(ox, oy);
  long long nlo = static_cast<long long>(-(reach / height + 2));
  long long nhi = static_cast<long long>(reach / height + 2);
  for (long long n = nlo; n <= nhi; ++n) {
    double bx = ox + n * qx, by = oy + n * qy;
    double proj = (bx * px + by * py) / pp;
    double d2 = bx * bx + by * by - proj * proj * pp;
    double disc = r * r - d2;
    double w = disc > 0 ? std::sqrt(disc / pp) : 0;
    long long mlo = static_cast<long long>(std::floor(-proj - w)) - 2;
    long long mhi = static_cast<long long>(std::ceil(-proj + w)) + 2;
    for (long long m = mlo; m <= mhi; ++m) visit(bx + m * px, by + m * py);
  }
  return acc.sum;
}

// Inclusion-exclusion over part subsets; measure is evaluated on each
// nonempty intersection with the subset parity sign.
template <typename Measure>
void fold_subsets(const LatticeZeroSet& z, unsigned long long budget, double reach,
                  Measure&& measure) {
  int k = static_cast<int>(z.parts.size());
  unsigned long long total = 0;
  for (const auto& part : z.parts) total += estimate_points(part, reach);
  if (total > budget)
    throw CountingBudgetError("enumeration of about " + std::to_string(total) +
                              " points exceeds the configured budget of " +
                              std::to_string(budget));
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::optional<ZeroPart> cur;
    bool empty = false;
    for (int b = 0; b < k; ++b) {
      if (!(mask & (1u << b))) continue;
      if (!cur) {
        cur = z.parts[b];
      } else {
        cur = intersect(*cur, z.parts[b]);
        if (!cur) { empty = true; break; }
      }
    }
    if (empty) continue;
    int sign = __builtin_popcount(mask) % 2 == 1 ? 1 : -1;
    measure(*cur, sign);
  }
}

}  // namespace

long long unreduced_count(const LatticeZeroSet& z, const Rat& t, const CountingOptions& opts) {
  validate(z);
  if (t <= 0) throw InputError("unreduced_count: t must be positive");
  long long total = 0;
  fold_subsets(z, opts.point_budget, to_double(t),
               [&](const ZeroPart& part, int sign) { total += sign * exact_count(part, t); });
  return total;
}

double counting_function(const LatticeZeroSet& z, double r, const CountingOptions& opts) {
  validate(z);
  if (!(r > 1)) throw InputError("counting_function: r must exceed 1");
  double total = 0;
  fold_subsets(z, opts.point_budget, r, [&](const ZeroPart& part, int sign) {
    double n = log_sum(part, r);
    if (contains_zero(part)) n += std::log(r);  // ord_0 contribution
    total += sign * n;
  });
  return total;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo) || !(lo > 0)) throw InputError("geometric_grid: bad parameters");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / double(count - 1));
  return g;
}

GrowthFit growth_fit(const LatticeZeroSet& z, const std::vector<double>& radii,
                     const CountingOptions& opts) {
  if (radii.size() < 10) throw InputError("growth_fit: need at least 10 radii");
  if (!std::is_sorted(radii.begin(), radii.end())) throw InputError("growth_fit: radii not ascending");
  if (radii.front() <= 1) throw InputError("growth_fit: radii must exceed 1");
  if (radii.back() < 100 * radii.front())
    throw InputError("growth_fit: grid must span at least two decades");
  GrowthFit fit;
  fit.radii = radii;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double r : radii) {
    double n = counting_function(z, r, opts);
    if (!(n > 0)) throw InputError("growth_fit: counting function vanishes on the grid");
    fit.values.push_back(n);
    double lx = std::log(r), ly = std::log(n);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  double m = static_cast<double>(radii.size());
  fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.coefficient = std::exp((sy - fit.exponent * sx) / m);
  return fit;
}

LatticeZeroSet integer_line_zeros() {
  return {{ZeroPart{{Rat(0), Rat(0)}, {{Rat(1), Rat(0)}}}}};
}

LatticeZeroSet gaussian_zeros() {
  return {{ZeroPart{{Rat(0), Rat(0)}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}}}};
}

LatticeZeroSet rank2_lattice_zeros(const ComplexRat& tau) {
  return {{ZeroPart{{Rat(0), Rat(0)}, {{Rat(1), Rat(0)}, tau}}}};
}

LatticeZeroSet gaussian_and_line_zeros(const Rat& alpha) {
  if (alpha == 0) throw InputError("gaussian_and_line_zeros: alpha must be nonzero");
  LatticeZeroSet z = gaussian_zeros();
  z.parts.push_back(ZeroPart{{Rat(0), Rat(0)}, {{Rat(0), 1 / alpha}}});
  return z;
}

LatticeZeroSet two_gaussian_zeros(const Rat& alpha) {
  if (alpha == 0) throw InputError("two_gaussian_zeros: alpha must be nonzero");
  LatticeZeroSet z = gaussian_zeros();
  z.parts.push_back(ZeroPart{{Rat(0), Rat(0)}, {{1 / alpha, Rat(0)}, {Rat(0), 1 / alpha}}});
  return z;
}

}  // namespace torusdiv
