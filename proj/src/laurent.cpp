#include "torusdiv/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace torusdiv {

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  long da = 0, db = 0;
  for (long e : a) da += e;
  for (long e : b) db += e;
  if (da != db) return da < db;
  return a < b;
}

LaurentPoly LaurentPoly::constant(long dim, const Rat& c) {
  LaurentPoly f(dim);
  f.add_term(Exponents(dim, 0), c);
  return f;
}

LaurentPoly LaurentPoly::monomial(long dim, const Exponents& u, const Rat& c) {
  if (static_cast<long>(u.size()) != dim)
    throw InputError("LaurentPoly::monomial: exponent length mismatch");
  LaurentPoly f(dim);
  f.add_term(u, c);
  return f;
}

LaurentPoly LaurentPoly::variable(long dim, long index) {
  Exponents u(dim, 0);
  u[index] = 1;
  return monomial(dim, u, Rat(1));
}

void LaurentPoly::add_term(const Exponents& u, const Rat& c) {
  if (c == 0) return;
  if (static_cast<long>(u.size()) != dim_)
    throw InputError("LaurentPoly::add_term: exponent length mismatch");
  auto [it, inserted] = terms_.emplace(u, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rat LaurentPoly::coefficient(const Exponents& u) const {
  auto it = terms_.find(u);
  return it == terms_.end() ? Rat(0) : it->second;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.dim() != b.dim()) throw InputError("LaurentPoly: dimension mismatch in sum");
  LaurentPoly r = a;
  for (const auto& [u, c] : b.terms_) r.add_term(u, c);
  return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
  return a + (-b);
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(dim_);
  for (const auto& [u, c] : terms_) r.terms_.emplace(u, -c);
  return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.dim() != b.dim()) throw InputError("LaurentPoly: dimension mismatch in product");
  LaurentPoly r(a.dim());
  Exponents u(a.dim());
  for (const auto& [ua, ca] : a.terms_)
    for (const auto& [ub, cb] : b.terms_) {
      for (long j = 0; j < a.dim(); ++j) u[j] = ua[j] + ub[j];
      r.add_term(u, ca * cb);
    }
  return r;
}

Exponents LaurentPoly::min_exponents() const {
  if (terms_.empty()) throw InputError("min_exponents: zero polynomial");
  Exponents m = terms_.begin()->first;
  for (const auto& [u, c] : terms_)
    for (long j = 0; j < dim_; ++j) m[j] = std::min(m[j], u[j]);
  return m;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Parser {
  const std::string& s;
  long dim;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(pos, what); }

  LaurentPoly parse_expr() {
    skip_ws();
    int sign = 1;
    if (accept('-')) sign = -1;
    else accept('+');
    LaurentPoly f = parse_term();
    if (sign < 0) f = -f;
    while (true) {
      skip_ws();
      if (accept('+')) f = f + parse_term();
      else if (accept('-')) f = f - parse_term();
      else break;
    }
    return f;
  }

  LaurentPoly parse_term() {
    LaurentPoly f = parse_factor();
    while (accept('*')) f = f * parse_factor();
    return f;
  }

  LaurentPoly parse_factor() {
    LaurentPoly base = parse_base();
    if (accept('^')) {
      long e = parse_int();
      base = power(base, e);
    }
    return base;
  }

  LaurentPoly power(const LaurentPoly& f, long e) {
    if (f.term_count() == 1) {
      const auto& [u, c] = *f.terms().begin();
      Exponents v(u.size());
      for (std::size_t j = 0; j < u.size(); ++j) v[j] = u[j] * e;
      return LaurentPoly::monomial(dim, v, rat_pow(c, e));
    }
    if (e < 0) fail("negative exponent requires a monomial base");
    LaurentPoly r = LaurentPoly::constant(dim, Rat(1));
    for (long i = 0; i < e; ++i) r = r * f;
    return r;
  }

  LaurentPoly parse_base() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      LaurentPoly f = parse_expr();
      skip_ws();
      if (!accept(')')) fail("expected ')'");
      return f;
    }
    if (c == 'X' || c == 'x') {
      ++pos;
      std::size_t start = pos;
      long idx = parse_digits("variable index");
      if (idx < 1 || idx > dim) {
        pos = start;
        fail("variable index out of range 1.." + std::to_string(dim));
      }
      return LaurentPoly::variable(dim, idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return LaurentPoly::constant(dim, parse_number());
    }
    fail("expected coefficient, variable or '('");
  }

  long parse_int() {
    skip_ws();
    bool paren = accept('(');
    int sign = 1;
    if (accept('-')) sign = -1;
    long v = parse_digits("integer exponent");
    if (paren && !accept(')')) fail("expected ')'");
    return sign * v;
  }

  long parse_digits(const std::string& what) {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected " + what);
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > (1l << 40)) fail("number too large");
      ++pos;
    }
    return v;
  }

  Rat parse_number() {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    std::size_t save = pos;
    skip_ws();
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      skip_ws();
      if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
        fail("expected denominator");
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      std::string lit = s.substr(start, pos - start);
      lit.erase(std::remove_if(lit.begin(), lit.end(),
                               [](unsigned char ch) { return std::isspace(ch); }),
                lit.end());
      try {
        return parse_rational(lit);
      } catch (const InputError&) {
        fail("bad rational coefficient '" + lit + "'");
      }
    }
    pos = save;
    return Rat(Int(s.substr(start, save - start), 10));
  }
};

}  // namespace

LaurentPoly parse_laurent(const std::string& text, long dim) {
  Parser p{text, dim};
  LaurentPoly f = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

std::string to_string(const LaurentPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  // Descending graded-lex: highest terms first.
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [u, c] = *it;
    Rat a = c;
    if (first) {
      if (a < 0) { out << "-"; a = -a; }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool constant = std::all_of(u.begin(), u.end(), [](long e) { return e == 0; });
    bool wrote_coeff = false;
    if (constant || a != 1) {
      out << format_rational(a);
      wrote_coeff = true;
    }
    if (!constant) {
      bool first_var = true;
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (u[j] == 0) continue;
        if (wrote_coeff || !first_var) out << "*";
        out << "X" << (j + 1);
        if (u[j] != 1) out << "^" << u[j];
        first_var = false;
        wrote_coeff = true;
      }
    }
  }
  return out.str();
}

Rat evaluate(const LaurentPoly& f, const std::vector<Rat>& x) {
  if (static_cast<long>(x.size()) != f.dim())
    throw InputError("evaluate: point dimension mismatch");
  Rat total(0);
  for (const auto& [u, c] : f.terms()) {
    Rat t = c;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (u[j] != 0) t *= rat_pow(x[j], u[j]);
    total += t;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Exact division

namespace {

LaurentPoly shift(const LaurentPoly& f, const Exponents& by) {
  LaurentPoly r(f.dim());
  Exponents u(f.dim());
  for (const auto& [v, c] : f.terms()) {
    for (long j = 0; j < f.dim(); ++j) u[j] = v[j] + by[j];
    r.add_term(u, c);
  }
  return r;
}

long max_last_exponent(const LaurentPoly& f) {
  long m = 0;
  bool any = false;
  for (const auto& [u, c] : f.terms()) {
    long e = u.back();
    if (!any || e > m) m = e;
    any = true;
  }
  return m;
}

// Terms of f whose last exponent equals k, as a polynomial in one fewer
// variable.
LaurentPoly last_slice(const LaurentPoly& f, long k) {
  LaurentPoly r(f.dim() - 1);
  for (const auto& [u, c] : f.terms()) {
    if (u.back() != k) continue;
    r.add_term(Exponents(u.begin(), u.end() - 1), c);
  }
  return r;
}

// g * c * X^u where c X^u is a term over one fewer variable placed at last
// exponent e, subtracted from f in place via return.
LaurentPoly mul_by_lifted(const LaurentPoly& g, const LaurentPoly& coef, long e) {
  LaurentPoly r(g.dim());
  Exponents u(g.dim());
  for (const auto& [ug, cg] : g.terms())
    for (const auto& [uc, cc] : coef.terms()) {
      for (long j = 0; j + 1 < g.dim(); ++j) u[j] = ug[j] + uc[j];
      u[g.dim() - 1] = ug[g.dim() - 1] + e;
      r.add_term(u, cg * cc);
    }
  return r;
}

// Division of honest polynomials ordered by the last variable, with
// coefficients in one fewer variable handled recursively.
std::optional<LaurentPoly> poly_quotient(const LaurentPoly& f, const LaurentPoly& g) {
  long d = f.dim();
  if (d == 0) {
    LaurentPoly q(0);
    q.add_term({}, f.coefficient({}) / g.coefficient({}));
    return q;
  }
  long m = max_last_exponent(g);
  LaurentPoly lead_g = last_slice(g, m);
  LaurentPoly rem = f;
  LaurentPoly quot(d);
  while (!rem.is_zero()) {
    long k = max_last_exponent(rem);
    if (k < m) return std::nullopt;
    auto t = exact_divide(last_slice(rem, k), lead_g);
    if (!t) return std::nullopt;
    for (const auto& [u, c] : t->terms()) {
      Exponents v(u);
      v.push_back(k - m);
      quot.add_term(v, c);
    }
    rem = rem - mul_by_lifted(g, *t, k - m);
  }
  return quot;
}

}  // namespace

std::optional<LaurentPoly> exact_divide(const LaurentPoly& f, const LaurentPoly& g) {
  if (g.is_zero()) throw InputError("exact_divide: division by the zero polynomial");
  if (f.dim() != g.dim()) throw InputError("exact_divide: dimension mismatch");
  if (f.is_zero()) return LaurentPoly(f.dim());
  Exponents mf = f.min_exponents(), mg = g.min_exponents();
  Exponents neg_mf(mf), neg_mg(mg), back(mf);
  for (long j = 0; j < f.dim(); ++j) {
    neg_mf[j] = -mf[j];
    neg_mg[j] = -mg[j];
    back[j] = mf[j] - mg[j];
  }
  auto q = poly_quotient(shift(f, neg_mf), shift(g, neg_mg));
  if (!q) return std::nullopt;
  return shift(*q, back);
}

LaurentPoly monomial_substitute(const LaurentPoly& f, const IntMatrix& a) {
  if (a.rows() != f.dim()) throw InputError("monomial_substitute: matrix rows != dim");
  long s = a.cols();
  LaurentPoly r(s);
  Exponents v(s);
  for (const auto& [u, c] : f.terms()) {
    for (long j = 0; j < s; ++j) {
      Int e(0);
      for (long i = 0; i < a.rows(); ++i) e += u[i] * a.at(i, j);
      if (!e.fits_slong_p()) throw InputError("monomial_substitute: exponent overflow");
      v[j] = e.get_si();
    }
    r.add_term(v, c);
  }
  return r;
}

LaurentPoly reduce_at(const LaurentPoly& f, const Exponents& u0) {
  if (f.coefficient(u0) == 0) throw InputError("reduce_at: exponent not in support");
  Exponents neg(u0);
  for (long& e : neg) e = -e;
  return shift(f, neg);
}

LaurentPoly translate_by_point(const LaurentPoly& f, const std::vector<Rat>& x) {
  if (static_cast<long>(x.size()) != f.dim())
    throw InputError("translate_by_point: dimension mismatch");
  LaurentPoly r(f.dim());
  for (const auto& [u, c] : f.terms()) {
    Rat scale = c;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (u[j] != 0) scale *= rat_pow(x[j], u[j]);
    r.add_term(u, scale);
  }
  return r;
}

namespace {

// Lattice of support differences, as rows relative to the first support point.
IntMatrix support_difference_lattice(const LaurentPoly& f) {
  std::vector<Exponents> supp;
  supp.reserve(f.term_count());
  for (const auto& [u, c] : f.terms()) supp.push_back(u);
  long k = static_cast<long>(supp.size());
  IntMatrix a(std::max(0l, k - 1), f.dim());
  for (long i = 1; i < k; ++i)
    for (long j = 0; j < f.dim(); ++j) a.at(i - 1, j) = supp[i][j] - supp[0][j];
  return a;
}

}  // namespace

StabilizerInfo stabilizer(const LaurentPoly& f) {
  if (f.is_zero()) throw InputError("stabilizer: zero polynomial");
  LatticeInvariants inv = lattice_invariants(support_difference_lattice(f));
  return StabilizerInfo{f.dim() - inv.rank, inv.invariant_factors};
}

std::optional<OmittedForm> omit_variables(const LaurentPoly& f) {
  if (f.is_zero()) throw InputError("omit_variables: zero polynomial");
  IntMatrix diffs = support_difference_lattice(f);
  HnfResult basis = hnf(diffs);
  long r = basis.rank;
  if (r == f.dim()) return std::nullopt;
  IntMatrix h(r, f.dim());
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < f.dim(); ++j) h.at(i, j) = basis.h.at(i, j);
  SnfResult s = snf(h);
  // H * V has nonzero entries only in its first r columns, so V sends all
  // support differences into the span of the first r coordinates.
  const IntMatrix& v = s.v;
  LaurentPoly moved = monomial_substitute(f, v);
  LaurentPoly reduced(r);
  for (const auto& [u, c] : moved.terms())
    reduced.add_term(Exponents(u.begin(), u.begin() + r), c);
  return OmittedForm{v, reduced};
}

std::vector<Rat> TorusMorphism::apply(const std::vector<Rat>& x) const {
  if (static_cast<long>(x.size()) != source_dim())
    throw InputError("TorusMorphism::apply: dimension mismatch");
  std::vector<Rat> y(target_dim(), Rat(1));
  for (long i = 0; i < target_dim(); ++i)
    for (long j = 0; j < source_dim(); ++j) {
      const Int& e = exponents.at(i, j);
      if (e == 0) continue;
      if (!e.fits_slong_p()) throw InputError("TorusMorphism: exponent overflow");
      y[i] *= rat_pow(x[j], e.get_si());
    }
  return y;
}

LaurentPoly TorusMorphism::pullback(const LaurentPoly& f) const {
  if (f.dim() != target_dim())
    throw InputError("TorusMorphism::pullback: dimension mismatch");
  return monomial_substitute(f, exponents);
}

bool TorusMorphism::is_isogeny() const {
  return exponents.rows() == exponents.cols() && det(exponents) != 0;
}

}  // namespace torusdiv
