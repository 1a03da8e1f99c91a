#include "torusdiv/lattice.hpp"

#include <algorithm>

namespace torusdiv {

IntMatrix::IntMatrix(long rows, long cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (static_cast<long>(a_.size()) != rows * cols)
    throw InputError("IntMatrix: entry count does not match shape");
}

IntMatrix IntMatrix::identity(long n) {
  IntMatrix m(n, n);
  for (long i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  long r = static_cast<long>(rows.size());
  long c = r == 0 ? 0 : static_cast<long>(rows[0].size());
  IntMatrix m(r, c);
  for (long i = 0; i < r; ++i) {
    if (static_cast<long>(rows[i].size()) != c)
      throw InputError("IntMatrix::from_rows: ragged rows");
    for (long j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

std::vector<Int> IntMatrix::row(long i) const {
  std::vector<Int> r(cols_);
  for (long j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (long i = 0; i < rows_; ++i)
    for (long j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("IntMatrix: shape mismatch in product");
  IntMatrix c(a.rows(), b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long k = 0; k < a.cols(); ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (long j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

namespace {

void swap_rows(IntMatrix& m, long i, long j) {
  if (i == j) return;
  for (long c = 0; c < m.cols(); ++c) std::swap(m.at(i, c), m.at(j, c));
}

void negate_row(IntMatrix& m, long i) {
  for (long c = 0; c < m.cols(); ++c) m.at(i, c) = -m.at(i, c);
}

// row_i -= q * row_k
void subtract_row(IntMatrix& m, long i, long k, const Int& q) {
  if (q == 0) return;
  for (long c = 0; c < m.cols(); ++c) m.at(i, c) -= q * m.at(k, c);
}

// Replace rows (i, k) by unimodular combinations that put gcd(a, b) at
// position (i, col) and 0 at (k, col), where a = H[i][col], b = H[k][col].
void gcd_rows(IntMatrix& h, IntMatrix& u, long i, long k, long col) {
  Int a = h.at(i, col), b = h.at(k, col);
  if (b == 0) return;
  if (a == 0) {
    swap_rows(h, i, k);
    swap_rows(u, i, k);
    return;
  }
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int ag = a / g, bg = b / g;
  for (long c = 0; c < h.cols(); ++c) {
    Int x = h.at(i, c), y = h.at(k, c);
    h.at(i, c) = s * x + t * y;
    h.at(k, c) = -bg * x + ag * y;
  }
  for (long c = 0; c < u.cols(); ++c) {
    Int x = u.at(i, c), y = u.at(k, c);
    u.at(i, c) = s * x + t * y;
    u.at(k, c) = -bg * x + ag * y;
  }
}

}  // namespace

HnfResult hnf(const IntMatrix& a) {
  IntMatrix h = a;
  IntMatrix u = IntMatrix::identity(a.rows());
  long r = 0;
  for (long col = 0; col < a.cols() && r < a.rows(); ++col) {
    long pivot = -1;
    for (long i = r; i < a.rows(); ++i) {
      if (h.at(i, col) == 0) continue;
      if (pivot == -1 || mpz_cmpabs(h.at(i, col).get_mpz_t(), h.at(pivot, col).get_mpz_t()) < 0)
        pivot = i;
    }
    if (pivot == -1) continue;
    swap_rows(h, r, pivot);
    swap_rows(u, r, pivot);
    for (long i = r + 1; i < a.rows(); ++i) gcd_rows(h, u, r, i, col);
    if (h.at(r, col) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (long i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h.at(i, col).get_mpz_t(), h.at(r, col).get_mpz_t());
      subtract_row(h, i, r, q);
      subtract_row(u, i, r, q);
    }
    ++r;
  }
  return HnfResult{std::move(h), std::move(u), r};
}

namespace {

int cmpabs_int(const Int& a, const Int& b) {
  return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

void swap_cols(IntMatrix& m, long i, long j) {
  if (i == j) return;
  for (long r = 0; r < m.rows(); ++r) std::swap(m.at(r, i), m.at(r, j));
}

void gcd_cols(IntMatrix& d, IntMatrix& v, long i, long k, long row) {
  Int a = d.at(row, i), b = d.at(row, k);
  if (b == 0) return;
  if (a == 0) {
    swap_cols(d, i, k);
    swap_cols(v, i, k);
    return;
  }
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int ag = a / g, bg = b / g;
  for (long r = 0; r < d.rows(); ++r) {
    Int x = d.at(r, i), y = d.at(r, k);
    d.at(r, i) = s * x + t * y;
    d.at(r, k) = -bg * x + ag * y;
  }
  for (long r = 0; r < v.rows(); ++r) {
    Int x = v.at(r, i), y = v.at(r, k);
    v.at(r, i) = s * x + t * y;
    v.at(r, k) = -bg * x + ag * y;
  }
}

}  // namespace

SnfResult snf(const IntMatrix& a) {
  IntMatrix d = a;
  IntMatrix u = IntMatrix::identity(a.rows());
  IntMatrix v = IntMatrix::identity(a.cols());
  long n = std::min(a.rows(), a.cols());
  for (long t = 0; t < n; ++t) {
    // Locate a nonzero entry of minimal absolute value in the remaining block.
    long pi = -1, pj = -1;
    for (long i = t; i < a.rows(); ++i)
      for (long j = t; j < a.cols(); ++j) {
        if (d.at(i, j) == 0) continue;
        if (pi == -1 || cmpabs_int(d.at(i, j), d.at(pi, pj)) < 0) { pi = i; pj = j; }
      }
    if (pi == -1) break;
    swap_rows(d, t, pi); swap_rows(u, t, pi);
    swap_cols(d, t, pj); swap_cols(v, t, pj);
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (long i = t + 1; i < a.rows(); ++i)
        if (d.at(i, t) != 0) { gcd_rows(d, u, t, i, t); dirty = true; }
      for (long j = t + 1; j < a.cols(); ++j)
        if (d.at(t, j) != 0) { gcd_cols(d, v, t, j, t); dirty = true; }
    }
    if (d.at(t, t) < 0) { negate_row(d, t); negate_row(u, t); }
  }
  // Enforce the divisibility chain d_t | d_{t+1}.
  for (long t = 0; t + 1 < n; ++t) {
    for (long k = t; k + 1 < n; ++k) {
      Int &x = d.at(k, k), &y = d.at(k + 1, k + 1);
      if (x == 0 && y != 0) {
        swap_rows(d, k, k + 1); swap_rows(u, k, k + 1);
        swap_cols(d, k, k + 1); swap_cols(v, k, k + 1);
        continue;
      }
      if (x == 0 || y == 0) continue;
      if (y % x == 0) continue;
      // Add column k+1 to column k, then restore diagonal form in the 2x2 block.
      for (long r = 0; r < d.rows(); ++r) d.at(r, k) += d.at(r, k + 1);
      for (long r = 0; r < v.rows(); ++r) v.at(r, k) += v.at(r, k + 1);
      gcd_rows(d, u, k, k + 1, k);
      gcd_cols(d, v, k, k + 1, k);
      // One more sweep in case the row op reintroduced an off-diagonal entry.
      while (d.at(k + 1, k) != 0 || d.at(k, k + 1) != 0) {
        gcd_rows(d, u, k, k + 1, k);
        gcd_cols(d, v, k, k + 1, k);
      }
      if (d.at(k, k) < 0) { negate_row(d, k); negate_row(u, k); }
      if (d.at(k + 1, k + 1) < 0) { negate_row(d, k + 1); negate_row(u, k + 1); }
    }
  }
  return SnfResult{std::move(d), std::move(u), std::move(v)};
}

std::optional<std::vector<Int>> solve_integral(const IntMatrix& a, const std::vector<Int>& b) {
  if (static_cast<long>(b.size()) != a.cols())
    throw InputError("solve_integral: dimension mismatch");
  HnfResult f = hnf(a);
  std::vector<Int> residual = b;
  std::vector<Int> y(a.rows(), Int(0));
  // Echelon rows top-down: later rows vanish at earlier pivot columns, so each
  // pivot determines its coefficient directly.
  for (long i = 0; i < f.rank; ++i) {
    long pcol = -1;
    for (long j = 0; j < a.cols(); ++j)
      if (f.h.at(i, j) != 0) { pcol = j; break; }
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), residual[pcol].get_mpz_t(),
                f.h.at(i, pcol).get_mpz_t());
    if (r != 0) return std::nullopt;
    y[i] = q;
    if (q != 0)
      for (long j = pcol; j < a.cols(); ++j) residual[j] -= q * f.h.at(i, j);
  }
  for (const Int& c : residual)
    if (c != 0) return std::nullopt;
  // x = y * U restricted to the echelon rows.
  std::vector<Int> x(a.rows(), Int(0));
  for (long i = 0; i < a.rows(); ++i) {
    if (y[i] == 0) continue;
    for (long j = 0; j < a.rows(); ++j) x[j] += y[i] * f.u.at(i, j);
  }
  return x;
}

std::optional<std::vector<Rat>> solve_rational(const IntMatrix& a, const std::vector<Rat>& b) {
  if (static_cast<long>(b.size()) != a.cols())
    throw InputError("solve_rational: dimension mismatch");
  long m = a.rows(), n = a.cols();
  // Gaussian elimination on the transposed system A^T x^T = b^T.
  std::vector<std::vector<Rat>> w(n, std::vector<Rat>(m + 1));
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < m; ++j) w[i][j] = Rat(a.at(j, i));
    w[i][m] = b[i];
  }
  long row = 0;
  std::vector<long> pivot_of_col(m, -1);
  for (long col = 0; col < m && row < n; ++col) {
    long p = -1;
    for (long i = row; i < n; ++i)
      if (w[i][col] != 0) { p = i; break; }
    if (p == -1) continue;
    std::swap(w[row], w[p]);
    Rat inv = 1 / w[row][col];
    for (long j = col; j <= m; ++j) w[row][j] *= inv;
    for (long i = 0; i < n; ++i) {
      if (i == row || w[i][col] == 0) continue;
      Rat f = w[i][col];
      for (long j = col; j <= m; ++j) w[i][j] -= f * w[row][j];
    }
    pivot_of_col[col] = row;
    ++row;
  }
  for (long i = row; i < n; ++i)
    if (w[i][m] != 0) return std::nullopt;  // inconsistent
  std::vector<Rat> x(m, Rat(0));
  for (long col = 0; col < m; ++col)
    if (pivot_of_col[col] >= 0) x[col] = w[pivot_of_col[col]][m];
  return x;
}

IntMatrix left_kernel(const IntMatrix& a) {
  HnfResult f = hnf(a);
  long k = a.rows() - f.rank;
  IntMatrix ker(k, a.rows());
  for (long i = 0; i < k; ++i)
    for (long j = 0; j < a.rows(); ++j) ker.at(i, j) = f.u.at(f.rank + i, j);
  return ker;
}

LatticeInvariants lattice_invariants(const IntMatrix& a) {
  SnfResult f = snf(a);
  LatticeInvariants inv;
  long n = std::min(a.rows(), a.cols());
  for (long i = 0; i < n; ++i) {
    const Int& d = f.d.at(i, i);
    if (d == 0) continue;
    ++inv.rank;
    if (d > 1) inv.invariant_factors.push_back(d);
  }
  return inv;
}

Int det(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("det: matrix not square");
  long n = a.rows();
  if (n == 0) return Int(1);
  IntMatrix m = a;
  Int prev(1);
  int sign = 1;
  for (long k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      long p = -1;
      for (long i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) { p = i; break; }
      if (p == -1) return Int(0);
      swap_rows(m, k, p);
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j < n; ++j) {
        Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = t / prev;  // Bareiss: division is exact
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  Int d = det(a);
  if (d != 1 && d != -1) throw InputError("unimodular_inverse: |det| != 1");
  long n = a.rows();
  // Adjugate via cofactors of the Bareiss-style minors; n is tiny here, so
  // direct cofactor expansion is fine.
  IntMatrix inv(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (long r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (long c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor.at(rr, cc) = a.at(r, c);
          ++cc;
        }
        ++rr;
      }
      Int cof = det(minor);
      if ((i + j) % 2 != 0) cof = -cof;
      inv.at(i, j) = cof * d;  // dividing by det == multiplying, since det^2 = 1
    }
  return inv;
}

}  // namespace torusdiv
