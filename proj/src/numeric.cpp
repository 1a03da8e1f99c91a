#include "torusdiv/numeric.hpp"

#include <cctype>

namespace torusdiv {

Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0) {
    if (e < 0) throw InputError("rat_pow: zero base with negative exponent");
    return Rat(0);
  }
  Rat b = base;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Rat r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(b.get_mpq_t()), k);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(b.get_mpq_t()), k);
  r.canonicalize();
  if (e < 0) r = 1 / r;
  return r;
}

std::vector<Rat> point_pow(const std::vector<Rat>& x, long e) {
  std::vector<Rat> r;
  r.reserve(x.size());
  for (const Rat& c : x) r.push_back(rat_pow(c, e));
  return r;
}

Rat parse_rational(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  bool digits = false, slash = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = true;
    } else if (s[i] == '/' && !slash && digits) {
      slash = true;
      digits = false;
    } else {
      throw InputError("bad rational literal: " + s);
    }
  }
  if (!digits) throw InputError("bad rational literal: " + s);
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw InputError("bad rational literal: " + s);
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw InputError("zero denominator in rational literal: " + s);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rat& q) {
  return q.get_str();
}

Rat parse_decimal(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return parse_rational(s);
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  if (tail.empty()) return parse_rational(head);
  for (char c : tail)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw InputError("bad decimal literal: " + s);
  bool neg = !head.empty() && head[0] == '-';
  if (head == "-" || head == "+") head += "0";
  if (head.empty()) head = "0";
  Rat whole = parse_rational(head);
  Rat frac(Int(tail, 10), int_pow(Int(10), tail.size()));
  frac.canonicalize();
  return neg ? Rat(whole - frac) : Rat(whole + frac);
}

}  // namespace torusdiv
